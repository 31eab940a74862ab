#include "sumctl/cli.hpp"

int main(int argc, char** argv)
{
    return sumctl::cli::run(argc, argv);
}
