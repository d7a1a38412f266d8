#include <iostream>
#include <string>
#include <vector>

#include "qd/cli_args.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    qd::CliOutcome o = qd::run_cli(args);
    std::cout << o.out;
    std::cerr << o.err;
    return o.code;
}
