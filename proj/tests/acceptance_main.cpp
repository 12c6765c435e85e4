// Standalone validation gate: runs the twelve acceptance criteria and exits
// nonzero if any fails. `--quick` runs the reduced panels (< 1 min).

#include <cstring>
#include <iostream>

#include "vortex/acceptance.hpp"

int main(int argc, char** argv) {
    vortex::acceptance::Options opt;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--quick") == 0) {
            opt.quick = true;
        } else if (std::strcmp(argv[i], "--corrupt-tolerances") == 0) {
            // harness self-test: shrink every tolerance so failures must appear
            opt.tol_scale = 1e-3;
        } else {
            std::cerr << "unknown option: " << argv[i] << "\n"
                      << "usage: acceptance [--quick] [--corrupt-tolerances]\n";
            return 2;
        }
    }

    const auto results = vortex::acceptance::run_all(opt, &std::cout);
    int failed = 0;
    for (const auto& r : results)
        if (!r.passed) ++failed;
    std::cout << (failed == 0 ? "ALL CRITERIA PASSED" : "CRITERIA FAILED") << " ("
              << results.size() - failed << "/" << results.size() << " passed)" << std::endl;
    return failed == 0 ? 0 : 1;
}
