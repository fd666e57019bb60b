#include "infogeo/jobs.hpp"

int main(int argc, char** argv) {
    return infogeo::cli::run_cli(argc, argv);
}
