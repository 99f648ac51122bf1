#pragma once

#include <string>

namespace mpir {

/// One protocol instance: K messages, D demanded, subpacketization L,
/// N = D*L + 1 servers, field F_q, m symbols per message.
struct SchemeParams {
    unsigned K = 0;
    unsigned D = 0;
    unsigned L = 0;
    unsigned N = 0;
    unsigned q = 3;
    unsigned m = 0;

    /// Builds and validates; m = 0 means m = L (one symbol per subpacket).
    static SchemeParams make(unsigned K, unsigned D, unsigned L, unsigned q = 3, unsigned m = 0);

    /// Throws ParameterError naming the first violated constraint.
    void validate() const;

    unsigned interference_count() const noexcept { return K - D; }
    unsigned subpacket_symbols() const noexcept { return m / L; }
    unsigned query_length() const noexcept { return K * L; }

    std::string to_string() const;

    friend bool operator==(const SchemeParams&, const SchemeParams&) = default;
};

} // namespace mpir
