// Classify the kernels on C4 over Gamma = C2 and print what the classes are,
// cross-checked against the extension oracle.

#include <iostream>

#include "bandcoh/catalog.hpp"
#include "bandcoh/extension.hpp"
#include "bandcoh/h2.hpp"

using namespace bandcoh;

int main() {
    auto A = cyclic(4);
    Perm inv = {0, 3, 2, 1};
    Band B = make_band(cyclic(2), A, {identity_perm(4), inv});

    auto h2 = h2_classes(B);
    std::cout << "kernel: C2 acting on C4 by inversion\n";
    std::cout << "H^2 classes: " << h2.count() << ", neutral: " << h2.neutral_count() << "\n";

    for (const auto& cls : h2.classes()) {
        auto e = extension_from_cocycle(B, cls.rep);
        std::string name = isomorphic(e.E, d4())   ? "D4"
                           : isomorphic(e.E, q8()) ? "Q8"
                                                   : "order-" + std::to_string(e.E.order());
        std::cout << "  class g(s,s) = " << cls.rep.gat(2, 1, 1) << "  ->  extension " << name
                  << (cls.neutral ? "  (split)" : "  (non-split)") << "\n";
    }

    auto oracle = enumerate_extensions(B);
    std::cout << "oracle agrees: " << oracle.count() << " classes, " << oracle.split_count()
              << " split\n";

    auto obs = obstruction(B);
    std::cout << "obstruction vanishes: " << (obs.zero ? "yes" : "no") << "\n";
    return 0;
}
