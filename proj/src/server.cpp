#include "mpir/server.hpp"

#include "mpir/errors.hpp"

#include <array>
#include <fstream>
#include <istream>
#include <ostream>

namespace mpir::server {

namespace {

constexpr std::array<char, 4> kMagic{'M', 'P', 'I', 'R'};
constexpr unsigned char kVersion = 0x01;

void put_u32(std::ostream& out, std::uint32_t v)
{
    const char bytes[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                           static_cast<char>((v >> 16) & 0xff), static_cast<char>((v >> 24) & 0xff)};
    out.write(bytes, 4);
}

std::uint32_t get_u32(std::istream& in, const char* what)
{
    unsigned char b[4];
    if (!in.read(reinterpret_cast<char*>(b), 4)) {
        throw FormatError(std::string("store file truncated reading ") + what);
    }
    return std::uint32_t{b[0]} | (std::uint32_t{b[1]} << 8) | (std::uint32_t{b[2]} << 16) |
           (std::uint32_t{b[3]} << 24);
}

} // namespace

MessageStore::MessageStore(const SchemeParams& params, std::vector<gf::FieldVector> messages)
    : params_(params), messages_(std::move(messages))
{
    params_.validate();
    if (messages_.size() != params_.K) {
        throw ParameterError("store needs " + std::to_string(params_.K) + " messages, got " +
                             std::to_string(messages_.size()));
    }
    for (const auto& msg : messages_) {
        if (msg.size() != params_.m || msg.order() != params_.q) {
            throw ParameterError("message does not have m=" + std::to_string(params_.m) +
                                 " symbols over F_" + std::to_string(params_.q));
        }
    }
}

MessageStore MessageStore::random(const SchemeParams& params, Seed seed)
{
    params.validate();
    Rng rng(seed);
    std::vector<gf::FieldVector> messages;
    for (unsigned k = 0; k < params.K; ++k) {
        gf::FieldVector v(params.m, params.q);
        for (unsigned s = 0; s < params.m; ++s) {
            v.set(s, rng.uniform(params.q));
        }
        messages.push_back(std::move(v));
    }
    return MessageStore(params, std::move(messages));
}

std::span<const gf::Symbol> MessageStore::subpacket(unsigned k, unsigned l) const
{
    if (l < 1 || l > params_.L) {
        throw ParameterError("subpacket index out of range");
    }
    const unsigned width = params_.subpacket_symbols();
    return message(k).values().subspan((l - 1) * width, width);
}

scheme::AnswerShare answer(const MessageStore& store, const scheme::QueryVector& query)
{
    const auto& p = store.params();
    if (query.coefficients.size() != p.query_length()) {
        throw ParameterError("query has length " + std::to_string(query.coefficients.size()) +
                             ", expected K*L = " + std::to_string(p.query_length()));
    }
    if (query.coefficients.order() != p.q) {
        throw ParameterError("query field F_" + std::to_string(query.coefficients.order()) +
                             " does not match store field F_" + std::to_string(p.q));
    }
    if (query.is_zero()) {
        return {};
    }
    const unsigned width = p.subpacket_symbols();
    const std::uint64_t q = p.q;
    std::vector<std::uint64_t> acc(width, 0);
    for (unsigned k = 1; k <= p.K; ++k) {
        for (unsigned l = 1; l <= p.L; ++l) {
            const std::uint64_t c = query.coefficient(k, l, p.L);
            if (c == 0) {
                continue;
            }
            const auto sub = store.subpacket(k, l);
            for (unsigned s = 0; s < width; ++s) {
                acc[s] = (acc[s] + c * sub[s]) % q;
            }
        }
    }
    return {std::vector<gf::Symbol>(acc.begin(), acc.end())};
}

void write_store(std::ostream& out, const MessageStore& store)
{
    const auto& p = store.params();
    out.write(kMagic.data(), kMagic.size());
    out.put(static_cast<char>(kVersion));
    put_u32(out, p.q);
    put_u32(out, p.K);
    put_u32(out, p.m);
    put_u32(out, p.L);
    put_u32(out, 0);
    for (unsigned k = 1; k <= p.K; ++k) {
        for (gf::Symbol s : store.message(k).values()) {
            put_u32(out, s);
        }
    }
    if (!out) {
        throw FormatError("failed writing store");
    }
}

void write_store(const std::filesystem::path& path, const MessageStore& store)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw FormatError("cannot open " + path.string() + " for writing");
    }
    write_store(out, store);
}

StoreFile read_store_file(std::istream& in)
{
    std::array<char, 4> magic{};
    if (!in.read(magic.data(), magic.size()) || magic != kMagic) {
        throw FormatError("not a message store (bad magic)");
    }
    const int version = in.get();
    if (version != kVersion) {
        throw FormatError("unsupported store version " + std::to_string(version));
    }
    StoreFile f;
    f.q = get_u32(in, "q");
    f.K = get_u32(in, "K");
    f.m = get_u32(in, "m");
    f.L = get_u32(in, "L");
    if (get_u32(in, "reserved") != 0) {
        throw FormatError("reserved header word must be 0");
    }
    if (f.q < 3 || !gf::is_prime(f.q) || f.K == 0 || f.L == 0 || f.m < f.L || f.m % f.L != 0) {
        throw FormatError("invalid store header (q=" + std::to_string(f.q) + " K=" +
                          std::to_string(f.K) + " m=" + std::to_string(f.m) + " L=" +
                          std::to_string(f.L) + ")");
    }
    for (unsigned k = 0; k < f.K; ++k) {
        gf::FieldVector v(f.m, f.q);
        for (unsigned s = 0; s < f.m; ++s) {
            const std::uint32_t x = get_u32(in, "symbol");
            if (x >= f.q) {
                throw FormatError("symbol " + std::to_string(x) + " out of range for q=" +
                                  std::to_string(f.q) + " (message " + std::to_string(k + 1) + ")");
            }
            v.set(s, x);
        }
        f.messages.push_back(std::move(v));
    }
    if (in.peek() != std::char_traits<char>::eof()) {
        throw FormatError("trailing bytes after store payload");
    }
    return f;
}

StoreFile read_store_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw FormatError("cannot open " + path.string());
    }
    return read_store_file(in);
}

MessageStore load_store(const std::filesystem::path& path, unsigned D)
{
    StoreFile f = read_store_file(path);
    return MessageStore(SchemeParams::make(f.K, D, f.L, f.q, f.m), std::move(f.messages));
}

} // namespace mpir::server
