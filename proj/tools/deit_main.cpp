#include "deit_cli.hpp"

int main(int argc, char** argv)
{
    return deit::cli::run(argc, argv);
}
