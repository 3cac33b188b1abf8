#include "goldcheck/cli.hpp"

int main(int argc, char** argv) {
    return goldcheck::cli::run(argc, argv);
}
