#include <string>
#include <vector>

#include "sccc/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return sccc::run_cli(args);
}
