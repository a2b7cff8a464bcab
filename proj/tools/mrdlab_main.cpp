#include "mrdlab/cli.hpp"

int main(int argc, char** argv) {
    return mrdlab::run_cli(std::vector<std::string>(argv + 1, argv + argc));
}
