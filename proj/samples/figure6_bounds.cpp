// Upper bounds on the symbol error probability of 8-HPSK and 8-PSK over a
// variance grid, one block per circle radius. Output is whitespace-separated
// columns suitable for gnuplot.

#include "hypgauss/hypgauss.hpp"

#include <cstdio>

int main() {
    using namespace hypgauss;
    for (double radius : {1.0, 1.5, 2.0}) {
        const Constellation hpsk = ensure_neighbors(make_mhpsk(8, radius));
        const Constellation psk = make_mpsk(8, radius);
        std::printf("# radius %.2f  adjacent distance %.6f\n", radius, hpsk.distance(0, 1));
        std::printf("# sigma2 hpsk_neighbors psk_bhattacharyya\n");
        for (int i = 1; i <= 20; ++i) {
            const double s2 = 0.05 * i;
            std::printf("%.2f %.6e %.6e\n", s2, union_bound(hpsk, s2, PairMode::Neighbors).mean_bound,
                        bhattacharyya_bound(psk, s2).mean_bound);
        }
        std::printf("\n\n");
    }
}
