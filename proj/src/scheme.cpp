#include "mpir/scheme.hpp"

#include "mpir/errors.hpp"

#include <algorithm>
#include <numeric>

namespace mpir::scheme {

DemandSet::DemandSet(unsigned K, std::vector<unsigned> indices) : K_(K), indices_(std::move(indices))
{
    std::sort(indices_.begin(), indices_.end());
    if (indices_.empty()) {
        throw ParameterError("demand set is empty");
    }
    if (std::adjacent_find(indices_.begin(), indices_.end()) != indices_.end()) {
        throw ParameterError("demand set has duplicate indices");
    }
    if (indices_.front() < 1 || indices_.back() > K_) {
        throw ParameterError("demand index out of range [1, " + std::to_string(K_) + "]");
    }
}

std::vector<unsigned> DemandSet::complement() const
{
    std::vector<unsigned> out;
    for (unsigned k = 1; k <= K_; ++k) {
        if (!contains(k)) {
            out.push_back(k);
        }
    }
    return out;
}

bool DemandSet::contains(unsigned k) const
{
    return std::binary_search(indices_.begin(), indices_.end(), k);
}

std::string DemandSet::to_string() const
{
    std::string s = "{";
    for (std::size_t n = 0; n < indices_.size(); ++n) {
        s += (n ? "," : "") + std::to_string(indices_[n]);
    }
    return s + "}";
}

std::vector<DemandSet> all_demand_sets(unsigned K, unsigned D)
{
    if (D < 1 || D > K) {
        throw ParameterError("need 1 <= D <= K");
    }
    std::vector<DemandSet> out;
    std::vector<unsigned> idx(D);
    std::iota(idx.begin(), idx.end(), 1u);
    while (true) {
        out.emplace_back(K, idx);
        // next combination in lexicographic order
        int pos = static_cast<int>(D) - 1;
        while (pos >= 0 && idx[pos] == K - D + 1 + static_cast<unsigned>(pos)) {
            --pos;
        }
        if (pos < 0) {
            break;
        }
        ++idx[pos];
        for (unsigned r = pos + 1; r < D; ++r) {
            idx[r] = idx[r - 1] + 1;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------

SubpacketLabeling::SubpacketLabeling(std::vector<std::vector<unsigned>> perm) : perm_(std::move(perm))
{
    for (const auto& p : perm_) {
        std::vector<unsigned> sorted = p;
        std::sort(sorted.begin(), sorted.end());
        for (unsigned l = 0; l < sorted.size(); ++l) {
            if (sorted[l] != l + 1 || p.size() != perm_.front().size()) {
                throw ParameterError("subpacket labeling is not a permutation of [1, L]");
            }
        }
    }
}

SubpacketLabeling SubpacketLabeling::identity(unsigned K, unsigned L)
{
    std::vector<std::vector<unsigned>> perm(K, std::vector<unsigned>(L));
    for (auto& p : perm) {
        std::iota(p.begin(), p.end(), 1u);
    }
    return SubpacketLabeling(std::move(perm));
}

SubpacketLabeling SubpacketLabeling::random(unsigned K, unsigned L, Rng& rng)
{
    std::vector<std::vector<unsigned>> perm;
    perm.reserve(K);
    for (unsigned k = 0; k < K; ++k) {
        auto p = rng.permutation(L);
        for (auto& x : p) {
            ++x;
        }
        perm.emplace_back(p.begin(), p.end());
    }
    return SubpacketLabeling(std::move(perm));
}

// ---------------------------------------------------------------------------

std::vector<unsigned> QueryVector::message_support(unsigned L) const
{
    std::vector<unsigned> out;
    const unsigned K = static_cast<unsigned>(coefficients.size() / L);
    for (unsigned k = 1; k <= K; ++k) {
        for (unsigned l = 1; l <= L; ++l) {
            if (coefficient(k, l, L) != 0) {
                out.push_back(k);
                break;
            }
        }
    }
    return out;
}

bool QueryVector::one_subpacket_per_message(unsigned L) const
{
    const unsigned K = static_cast<unsigned>(coefficients.size() / L);
    for (unsigned k = 1; k <= K; ++k) {
        unsigned touched = 0;
        for (unsigned l = 1; l <= L; ++l) {
            touched += coefficient(k, l, L) != 0;
        }
        if (touched > 1) {
            return false;
        }
    }
    return true;
}

// ---------------------------------------------------------------------------

PairSampler::PairSampler(const ratemath::ProbabilityTable& table)
{
    Integer den = 1;
    for (unsigned i = 0; i < table.row_count(); ++i) {
        for (unsigned j = 1; j <= table.col_count(); ++j) {
            const Rational& p = table.p(i, j);
            if (sgn(p) < 0) {
                throw ParameterError("negative probability in table");
            }
            if (sgn(p) > 0) {
                mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), p.get_den_mpz_t());
            }
        }
    }
    Integer acc = 0;
    for (unsigned i = 0; i < table.row_count(); ++i) {
        for (unsigned j = 1; j <= table.col_count(); ++j) {
            const Rational& p = table.p(i, j);
            if (sgn(p) == 0) {
                continue;
            }
            acc += p.get_num() * (den / p.get_den());
            atoms_.push_back({i, j});
            cumulative_.push_back(acc);
        }
    }
    if (acc != den) {
        throw ParameterError("table probabilities do not sum to 1");
    }
    denominator_ = den;
    if (den.fits_ulong_p()) {
        denominator_small_ = den.get_ui();
        for (const auto& c : cumulative_) {
            cumulative_small_.push_back(c.get_ui());
        }
    }
}

Pair PairSampler::sample(Rng& rng) const
{
    std::size_t k = 0;
    if (denominator_small_ != 0) {
        const std::uint64_t u = rng.uniform(denominator_small_);
        k = static_cast<std::size_t>(
            std::upper_bound(cumulative_small_.begin(), cumulative_small_.end(), u) -
            cumulative_small_.begin());
    } else {
        const Integer u = rng.uniform(denominator_);
        k = static_cast<std::size_t>(
            std::upper_bound(cumulative_.begin(), cumulative_.end(), u) - cumulative_.begin());
    }
    return atoms_.at(k);
}

Pair sample_pair(const ratemath::ProbabilityTable& table, Rng& rng)
{
    return PairSampler(table).sample(rng);
}

gf::FieldVector sample_sparse_vector(unsigned i, unsigned len, unsigned q, Rng& rng)
{
    if (i > len) {
        throw ParameterError("sparse vector weight " + std::to_string(i) + " exceeds length " +
                             std::to_string(len));
    }
    gf::FieldVector h(len, q);
    const auto support = rng.subset(len, i);
    for (unsigned pos : support) {
        h.set(pos, 1 + rng.uniform(q - 1));
    }
    return h;
}

std::vector<unsigned> shifted_support(std::span<const unsigned> first, unsigned D, unsigned m)
{
    std::vector<unsigned> out;
    out.reserve(first.size());
    for (unsigned c : first) {
        out.push_back((c + m - 1) % D);
    }
    std::sort(out.begin(), out.end());
    return out;
}

gf::FieldMatrix sample_regular_matrix(unsigned j, unsigned D, unsigned q, Rng& rng,
                                      std::vector<unsigned>* row1_support)
{
    if (j < 1 || j > D) {
        throw ParameterError("regular matrix needs 1 <= j <= D (j=" + std::to_string(j) +
                             ", D=" + std::to_string(D) + ")");
    }
    gf::require_field_order(q);
    const auto first = rng.subset(D, j);
    if (row1_support) {
        *row1_support = first;
    }
    std::vector<std::vector<unsigned>> supports;
    for (unsigned m = 1; m <= D; ++m) {
        supports.push_back(shifted_support(first, D, m));
    }
    for (unsigned attempt = 0; attempt < kMaxInvertAttempts; ++attempt) {
        gf::FieldMatrix G(D, D, q);
        for (unsigned r = 0; r < D; ++r) {
            for (unsigned c : supports[r]) {
                G.set(r, c, 1 + rng.uniform(q - 1));
            }
        }
        if (gf::mat_invert(G)) {
            return G;
        }
    }
    throw ConstructionError("no invertible " + std::to_string(j) + "-regular " + std::to_string(D) +
                            "x" + std::to_string(D) + " matrix over F_" + std::to_string(q) +
                            " after " + std::to_string(kMaxInvertAttempts) + " draws");
}

QueryPlan assemble_plan(const SchemeParams& params, const DemandSet& demand,
                        SubpacketLabeling labeling, Pair pair, gf::FieldVector h,
                        gf::FieldMatrix G, std::vector<unsigned> g_support,
                        std::vector<unsigned> permutation)
{
    params.validate();
    const unsigned K = params.K, D = params.D, L = params.L, N = params.N, q = params.q;
    if (demand.message_count() != K || demand.size() != D) {
        throw ParameterError("demand set " + demand.to_string() + " does not fit " + params.to_string());
    }
    if (h.size() != K - D || h.order() != q || G.rows() != D || G.cols() != D || G.order() != q) {
        throw ParameterError("h or G has the wrong shape for " + params.to_string());
    }
    if (labeling.subpackets() != L) {
        throw ParameterError("labeling does not have L subpackets per message");
    }
    if (permutation.size() != N) {
        throw ParameterError("server permutation must have N entries");
    }

    const auto interference = demand.complement();
    const auto& wanted = demand.indices();

    gf::FieldVector base(params.query_length(), q);
    for (unsigned p = 0; p < K - D; ++p) {
        if (h[p] != 0) {
            const unsigned k = interference[p];
            base.set((k - 1) * L + labeling.physical(k, 1) - 1, h[p]);
        }
    }

    std::vector<QueryVector> constructed;
    constructed.reserve(N);
    constructed.push_back({base});
    for (unsigned l = 1; l <= L; ++l) {
        for (unsigned m = 1; m <= D; ++m) {
            gf::FieldVector v = base;
            for (unsigned p = 0; p < D; ++p) {
                const gf::Symbol c = G(m - 1, p);
                if (c != 0) {
                    const unsigned k = wanted[p];
                    v.set((k - 1) * L + labeling.physical(k, l) - 1, c);
                }
            }
            constructed.push_back({std::move(v)});
        }
    }

    std::vector<QueryVector> queries;
    queries.reserve(N);
    for (unsigned n = 0; n < N; ++n) {
        queries.push_back(constructed.at(permutation[n]));
    }

    return QueryPlan{params,
                     demand,
                     std::move(labeling),
                     pair,
                     std::move(h),
                     std::move(G),
                     std::move(g_support),
                     std::move(constructed),
                     std::move(permutation),
                     std::move(queries)};
}

QueryBuilder::QueryBuilder(const ratemath::ProbabilityTable& table, SamplerBias bias)
    : params_(table.params), sampler_(table), bias_(bias)
{
}

QueryPlan QueryBuilder::build(const DemandSet& demand, Rng& rng) const
{
    const unsigned K = params_.K, D = params_.D, L = params_.L, q = params_.q;
    const Pair pair = sampler_.sample(rng);

    gf::FieldVector h(K - D, q);
    if (bias_.pin_interference_support || bias_.unit_interference_values) {
        const auto support = bias_.pin_interference_support
                                 ? [&] {
                                       std::vector<unsigned> s(pair.i);
                                       std::iota(s.begin(), s.end(), 0u);
                                       return s;
                                   }()
                                 : rng.subset(K - D, pair.i);
        for (unsigned pos : support) {
            h.set(pos, bias_.unit_interference_values ? 1 : 1 + rng.uniform(q - 1));
        }
    } else {
        h = sample_sparse_vector(pair.i, K - D, q, rng);
    }

    std::vector<unsigned> g_support;
    gf::FieldMatrix G = sample_regular_matrix(pair.j, D, q, rng, &g_support);
    SubpacketLabeling labeling = SubpacketLabeling::random(K, L, rng);
    auto perm = rng.permutation(params_.N);
    std::vector<unsigned> permutation(perm.begin(), perm.end());

    return assemble_plan(params_, demand, std::move(labeling), pair, std::move(h), std::move(G),
                         std::move(g_support), std::move(permutation));
}

QueryPlan build_query_plan(const SchemeParams& params, const DemandSet& demand,
                           const ratemath::ProbabilityTable& table, Rng& rng)
{
    if (!(table.params == params)) {
        throw ParameterError("table was built for different parameters");
    }
    return QueryBuilder(table).build(demand, rng);
}

std::vector<gf::FieldVector> decode(const QueryPlan& plan, std::span<const AnswerShare> answers)
{
    const auto& p = plan.params;
    const unsigned D = p.D, L = p.L, N = p.N, q = p.q;
    const unsigned width = p.subpacket_symbols();
    if (answers.size() != N) {
        throw ParameterError("expected " + std::to_string(N) + " answers, got " +
                             std::to_string(answers.size()));
    }

    // Y[v] is the answer to constructed vector v
    std::vector<gf::FieldVector> Y(N, gf::FieldVector(width, q));
    for (unsigned n = 0; n < N; ++n) {
        const AnswerShare& a = answers[n];
        const bool zero_query = plan.queries.at(n).is_zero();
        if (a.empty()) {
            if (!zero_query) {
                throw ParameterError("server " + std::to_string(n + 1) +
                                     " returned nothing for a nonzero query");
            }
            continue;
        }
        if (a.symbols.size() != width) {
            throw ParameterError("answer from server " + std::to_string(n + 1) + " has " +
                                 std::to_string(a.symbols.size()) + " symbols, expected " +
                                 std::to_string(width));
        }
        Y[plan.permutation[n]] = gf::FieldVector(a.symbols, q);
    }

    const auto Ginv = gf::mat_invert(plan.G);
    if (!Ginv) {
        throw IntegrityError("demand matrix is singular; the DL x DL system is rank deficient");
    }

    const gf::PrimeField field(q);
    std::vector<gf::FieldVector> messages(D, gf::FieldVector(p.m, q));
    const auto& wanted = plan.demand.indices();
    for (unsigned l = 1; l <= L; ++l) {
        // Z rows for this subpacket index: Y_{(l-1)D+m+1} - Y_1, m = 1..D
        std::vector<gf::FieldVector> Z;
        Z.reserve(D);
        for (unsigned m = 1; m <= D; ++m) {
            gf::FieldVector z = Y[(l - 1) * D + m];
            z.add_scaled(field.neg(1), Y[0]);
            Z.push_back(std::move(z));
        }
        for (unsigned r = 0; r < D; ++r) {
            gf::FieldVector x(width, q);
            for (unsigned m = 0; m < D; ++m) {
                x.add_scaled((*Ginv)(r, m), Z[m]);
            }
            const unsigned phys = plan.labeling.physical(wanted[r], l);
            for (unsigned s = 0; s < width; ++s) {
                messages[r].set((phys - 1) * width + s, x[s]);
            }
        }
    }
    return messages;
}

} // namespace mpir::scheme
