#pragma once

// Honest-but-curious server: holds the K messages and answers one query with
// one linear combination of physical subpackets.
//
// Store file layout (all integers little-endian):
//   "MPIR" | 0x01 | q:u32 | K:u32 | m:u32 | L:u32 | reserved:u32 (=0)
//   followed by K*m symbols as u32, message-major.

#include "mpir/gf.hpp"
#include "mpir/params.hpp"
#include "mpir/random.hpp"
#include "mpir/scheme.hpp"

#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

namespace mpir::server {

class MessageStore {
public:
    /// Throws ParameterError unless there are exactly K messages of m symbols in F_q.
    MessageStore(const SchemeParams& params, std::vector<gf::FieldVector> messages);

    /// Uniform random messages.
    static MessageStore random(const SchemeParams& params, Seed seed);

    const SchemeParams& params() const noexcept { return params_; }
    /// k is 1-based.
    const gf::FieldVector& message(unsigned k) const { return messages_.at(k - 1); }
    /// Physical subpacket l (1-based) of message k: symbols [(l-1)m/L, l*m/L).
    std::span<const gf::Symbol> subpacket(unsigned k, unsigned l) const;

private:
    SchemeParams params_;
    std::vector<gf::FieldVector> messages_;
};

/// Empty share for an all-zero query; otherwise sum_{k,l} v_{k,l} X_{k,l}.
scheme::AnswerShare answer(const MessageStore& store, const scheme::QueryVector& query);

/// Raw file contents; D is not part of the file, the caller binds it.
struct StoreFile {
    unsigned q = 0;
    unsigned K = 0;
    unsigned m = 0;
    unsigned L = 0;
    std::vector<gf::FieldVector> messages;
};

void write_store(std::ostream& out, const MessageStore& store);
void write_store(const std::filesystem::path& path, const MessageStore& store);

/// Throws FormatError on bad magic/version, nonzero reserved word, truncation,
/// trailing bytes or symbols >= q.
StoreFile read_store_file(std::istream& in);
StoreFile read_store_file(const std::filesystem::path& path);

/// Reads a store and binds it to D demanded messages (N = D*L + 1).
MessageStore load_store(const std::filesystem::path& path, unsigned D);

} // namespace mpir::server
