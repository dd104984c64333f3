// Regenerates the bundled reference database directory from the built-in
// design tables. Usage: phantom-refdata <output-dir>
#include <cstdio>
#include <exception>

#include "phantom/refdata.hpp"

int main(int argc, char** argv) {
    if (argc != 2) {
        std::fprintf(stderr, "usage: %s <output-dir>\n", argv[0]);
        return 2;
    }
    try {
        auto library = phantom::reference_tissue_library();
        auto db = phantom::build_reference_database(library);
        db.save_dir(argv[1]);
        std::printf("wrote %zu samples to %s\n", db.samples().size(), argv[1]);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
