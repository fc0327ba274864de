// Concurrency consumer: eight threads hammer one shared error box with
// balanced retain/release pairs. If the refcount operations were not
// atomic the count would drift and the box would die early or leak;
// either way the final checks fail. Builds in both modes.
#include <cstdint>
#include <cstdio>
#include <thread>
#include <vector>

#include "Functions.h"

namespace {

// Provoke one thrown error and keep a single owned reference to it.
uint64_t captureSharedError() {
    uint64_t shared = 0;
#ifdef __cpp_exceptions
    try {
        (void)Functions::division(0, 0);
    } catch (Swift::Error& e) {
        shared = eb_error_retain(e.rawHandle());
    }
#else
    {
        auto result = Functions::division(0, 0);
        if (!result.has_value()) {
            shared = eb_error_retain(result.error().rawHandle());
        }
    }
#endif
    return shared;
}

int run() {
    uint64_t shared = captureSharedError();
    if (shared == 0) {
        fprintf(stderr, "no error captured\n");
        return 1;
    }

    const int threadCount = 8;
    const int rounds = 10000;
    std::vector<std::thread> workers;
    for (int t = 0; t < threadCount; ++t) {
        workers.emplace_back([shared]() {
            for (int i = 0; i < rounds; ++i) {
                eb_error_retain(shared);
                eb_error_release(shared);
            }
        });
    }
    for (auto& worker : workers) {
        worker.join();
    }

    // The box must have survived with its identity intact, and the one
    // reference we kept must still be the only one.
    Swift::Error survivor(shared);
    auto typed = survivor.as<Functions::DivByZero>();
    if (!typed.isSome() || !(typed.get() == Functions::DivByZero::bothAreZero)) {
        fprintf(stderr, "shared error lost its identity\n");
        return 1;
    }
    printf("stress done\n");
    return 0;
}

}  // namespace

int main() {
    int rc = run();
    if (rc != 0) {
        return rc;
    }
    if (eb_live_errors() != 0) {
        fprintf(stderr, "live error boxes at exit: %llu\n",
                (unsigned long long)eb_live_errors());
        return 1;
    }
    return 0;
}
