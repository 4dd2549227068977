#include <iostream>
#include <string>
#include <vector>

#include "tlsub/cli_report.hpp"

int main(int argc, char **argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return tlsub::cli::run_cli(args, std::cout, std::cerr);
}
