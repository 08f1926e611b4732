// Build a small equivariant homogeneous space, compute its stabilizer band
// and decide whether the transporter can be refined into a cocycle.

#include <iostream>

#include "bandcoh/catalog.hpp"
#include "bandcoh/springer.hpp"

using namespace bandcoh;

int main() {
    // C2 acts on C4 by inversion; X = {0,2}\C4 with the action twisted by the
    // generator, so no point is fixed
    Perm inv = {0, 3, 2, 1};
    auto G = make_gamma_group(cyclic(2), cyclic(4), {identity_perm(4), inv});
    auto sp = coset_space(G, {0, 2}, {0, 1});

    std::cout << "points: " << sp.points
              << ", fixed point: " << (has_gamma_fixed_point(sp) ? "yes" : "no") << "\n";
    auto cls = springer_class(sp);
    std::cout << "stabilizer order: " << cls.at_base.band.kernel.order() << "\n";
    std::cout << "springer class neutral: " << (cls.neutral ? "yes" : "no") << "\n";

    if (auto lift = has_equivariant_lift(sp)) {
        std::cout << "transporter refinement:";
        for (int g : lift->transporter) std::cout << " " << g;
        std::cout << "\n";
    } else {
        std::cout << "no equivariant lift exists\n";
    }
    return 0;
}
