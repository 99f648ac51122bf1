#include "mpir/errors.hpp"
#include "mpir/server.hpp"

#include <doctest.h>

#include <sstream>

using namespace mpir;
using namespace mpir::server;
using gf::Symbol;

namespace {

scheme::QueryVector qv(std::vector<Symbol> c, unsigned q)
{
    return {gf::FieldVector(std::move(c), q)};
}

std::string le32(std::uint32_t v)
{
    return {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff), static_cast<char>((v >> 16) & 0xff),
            static_cast<char>(v >> 24)};
}

} // namespace

TEST_CASE("answers")
{
    const auto p = SchemeParams::make(4, 2, 2, 7, 4);
    const auto store = MessageStore::random(p, 3);

    CHECK(answer(store, qv(std::vector<Symbol>(8, 0), 7)).empty());

    for (unsigned k = 1; k <= 4; ++k)
        for (unsigned l = 1; l <= 2; ++l) {
            std::vector<Symbol> c(8, 0);
            c[(k - 1) * 2 + (l - 1)] = 1;
            const auto sub = store.subpacket(k, l);
            CHECK(answer(store, qv(c, 7)).symbols == std::vector<Symbol>(sub.begin(), sub.end()));
        }

    const Symbol g1 = 3, h1 = 5;
    const auto y2 = answer(store, qv({g1, 0, 0, 0, h1, 0, 0, 0}, 7));
    const gf::PrimeField F(7);
    for (unsigned s = 0; s < 2; ++s) {
        CHECK(y2.symbols[s] == F.add(F.mul(g1, store.subpacket(1, 1)[s]), F.mul(h1, store.subpacket(3, 1)[s])));
    }

    CHECK_THROWS_AS(answer(store, qv(std::vector<Symbol>(6, 0), 7)), ParameterError);
    CHECK_THROWS_AS(answer(store, qv(std::vector<Symbol>(8, 0), 5)), ParameterError);
}

TEST_CASE("answers are linear and deterministic")
{
    const auto p = SchemeParams::make(3, 1, 2, 5, 6);
    const auto store = MessageStore::random(p, 9);
    const gf::PrimeField F(5);
    Rng rng(1);
    for (int t = 0; t < 200; ++t) {
        std::vector<Symbol> u(6), v(6), w(6);
        const Symbol a = rng.uniform(5), b = rng.uniform(5);
        for (unsigned n = 0; n < 6; ++n) {
            u[n] = rng.uniform(5);
            v[n] = rng.uniform(5);
            w[n] = F.add(F.mul(a, u[n]), F.mul(b, v[n]));
        }
        const auto zu = answer(store, qv(u, 5)), zv = answer(store, qv(v, 5)), zw = answer(store, qv(w, 5));
        CHECK(zw == answer(store, qv(w, 5)));
        for (unsigned s = 0; s < 3; ++s) {
            const Symbol su = zu.empty() ? 0 : zu.symbols[s];
            const Symbol sv = zv.empty() ? 0 : zv.symbols[s];
            const Symbol sw = zw.empty() ? 0 : zw.symbols[s];
            CHECK(sw == F.add(F.mul(a, su), F.mul(b, sv)));
        }
    }
}

TEST_CASE("store validation")
{
    const auto p = SchemeParams::make(2, 1, 2, 3, 2);
    CHECK_THROWS_AS(MessageStore(p, {gf::FieldVector(2, 3)}), ParameterError);
    CHECK_THROWS_AS(MessageStore(p, {gf::FieldVector(2, 3), gf::FieldVector(3, 3)}), ParameterError);
    CHECK_THROWS_AS(MessageStore(p, {gf::FieldVector(2, 3), gf::FieldVector(2, 5)}), ParameterError);
    const MessageStore ok(p, {gf::FieldVector({1, 2}, 3), gf::FieldVector({0, 1}, 3)});
    CHECK(ok.subpacket(1, 2)[0] == 2);
    CHECK_THROWS_AS(ok.subpacket(1, 3), ParameterError);
}

TEST_CASE("store file layout is byte exact")
{
    const auto p = SchemeParams::make(2, 1, 2, 5, 4);
    const MessageStore store(p, {gf::FieldVector({1, 2, 3, 4}, 5), gf::FieldVector({0, 4, 0, 1}, 5)});
    std::ostringstream out(std::ios::binary);
    write_store(out, store);

    std::string expected = "MPIR";
    expected += '\x01';
    for (std::uint32_t v : {5u, 2u, 4u, 2u, 0u, 1u, 2u, 3u, 4u, 0u, 4u, 0u, 1u}) {
        expected += le32(v);
    }
    CHECK(out.str() == expected);
    CHECK(out.str().size() == 5 + 20 + 8 * 4);

    std::istringstream in(out.str(), std::ios::binary);
    const auto f = read_store_file(in);
    CHECK(f.q == 5);
    CHECK(f.K == 2);
    CHECK(f.m == 4);
    CHECK(f.L == 2);
    CHECK(f.messages[0] == store.message(1));
    CHECK(f.messages[1] == store.message(2));
}

TEST_CASE("store file round trip through disk")
{
    const auto p = SchemeParams::make(5, 2, 3, 11, 9);
    const auto store = MessageStore::random(p, 12);
    const auto path = std::filesystem::temp_directory_path() / "mpir_store_roundtrip.bin";
    write_store(path, store);
    const auto back = load_store(path, 2);
    CHECK(back.params() == p);
    for (unsigned k = 1; k <= 5; ++k) {
        CHECK(back.message(k) == store.message(k));
    }
    std::filesystem::remove(path);
    CHECK_THROWS_AS(read_store_file(path), FormatError);
}

TEST_CASE("store file rejections")
{
    const auto p = SchemeParams::make(2, 1, 1, 3, 1);
    const MessageStore store(p, {gf::FieldVector(std::vector<Symbol>{1}, 3), gf::FieldVector(std::vector<Symbol>{2}, 3)});
    std::ostringstream out(std::ios::binary);
    write_store(out, store);
    const std::string good = out.str();

    auto rejects = [](const std::string& bytes) {
        std::istringstream in(bytes, std::ios::binary);
        CHECK_THROWS_AS(read_store_file(in), FormatError);
    };

    std::string bad = good;
    bad[0] = 'X';
    rejects(bad);

    bad = good;
    bad[4] = '\x02';
    rejects(bad);

    bad = good;
    bad.replace(5 + 16, 4, le32(1));
    rejects(bad);

    bad = good;
    bad.replace(5, 4, le32(4));
    rejects(bad);

    bad = good;
    bad.replace(5 + 20, 4, le32(3));
    rejects(bad);

    rejects(good.substr(0, good.size() - 1));
    rejects(good.substr(0, 10));
    rejects(good + '\0');

    std::istringstream in(good, std::ios::binary);
    CHECK(read_store_file(in).messages.size() == 2);
}
