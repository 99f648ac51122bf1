#include "mpir/params.hpp"

#include "mpir/errors.hpp"
#include "mpir/gf.hpp"

#include <limits>

namespace mpir {

SchemeParams SchemeParams::make(unsigned K, unsigned D, unsigned L, unsigned q, unsigned m)
{
    if (D > 0 && L > std::numeric_limits<unsigned>::max() / D) {
        throw ParameterError("D*L overflows");
    }
    SchemeParams p{K, D, L, D * L + 1, q, m == 0 ? L : m};
    p.validate();
    return p;
}

void SchemeParams::validate() const
{
    if (D < 1 || D > K) {
        throw ParameterError("need 1 <= D <= K (got K=" + std::to_string(K) +
                             ", D=" + std::to_string(D) + ")");
    }
    if (L < 1) {
        throw ParameterError("need L >= 1");
    }
    if (N != D * L + 1) {
        throw ParameterError("N must equal D*L+1 = " + std::to_string(D * L + 1) + " (got " +
                             std::to_string(N) + ")");
    }
    gf::require_field_order(q);
    if (m < L || m % L != 0) {
        throw ParameterError("m=" + std::to_string(m) + " must be a positive multiple of L=" +
                             std::to_string(L));
    }
}

std::string SchemeParams::to_string() const
{
    return "K=" + std::to_string(K) + " D=" + std::to_string(D) + " L=" + std::to_string(L) +
           " N=" + std::to_string(N) + " q=" + std::to_string(q) + " m=" + std::to_string(m);
}

} // namespace mpir
