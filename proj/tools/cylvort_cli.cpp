#include "cylvort/io.hpp"

int main(int argc, char** argv) {
    return cylvort::cli_dispatch(argc, argv);
}
