#include <string>
#include <vector>

#include "conescan/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return conescan::run_cli(args);
}
