#pragma once

#include <functional>

#include "channel.hpp"
#include "folding.hpp"

namespace agiopp {

enum class FinalMode : u8 { fold_to_constant = 0, membership = 1 };
enum class CoinMode : u8 { interactive_sim = 0, fiat_shamir = 1 };
enum class QuerySampling : u8 { independent = 0, without_replacement = 1 };

struct ProverState {
    std::vector<std::vector<Fe>> oracles;           // f^(0) .. f^(r); f^(0) over the base field
    std::vector<std::array<Fe, 2>> challenges;      // z^(0) .. z^(r-1)
    Fe beta{};                                      // fold-to-constant commitment
};

struct VerifierDecision {
    enum class Reason : u8 { none, round_consistency, final_test, commitment, challenge_mismatch, structure };
    bool accept = false;
    Reason reason = Reason::none;
    int round = -1;
    int repetition = -1;
    std::string detail;

    static VerifierDecision ok() { return VerifierDecision{true, Reason::none, -1, -1, ""}; }
    static VerifierDecision reject(Reason r, int round, int rep, std::string d) {
        return VerifierDecision{false, r, round, rep, std::move(d)};
    }
    const char* reason_name() const {
        switch (reason) {
            case Reason::none: return "none";
            case Reason::round_consistency: return "round-consistency";
            case Reason::final_test: return "final";
            case Reason::commitment: return "commitment";
            case Reason::challenge_mismatch: return "challenge-mismatch";
            case Reason::structure: return "structure";
        }
        return "?";
    }
};

// ---------- COMMIT phase ----------

// Honest prover folding chain: f^(i+1) = Fold(f^(i), z^(i)). In fold-to-constant
// mode beta is the first entry of the final table (for an honest codeword the
// final table is constant).
inline ProverState commit_phase(const ProtocolContext& ctx, const std::vector<Fe>& f0,
                                const std::vector<std::array<Fe, 2>>& challenges, unsigned threads = 1) {
    unsigned r = ctx.rounds();
    require(challenges.size() == r, "commit_phase: challenge count != rounds");
    require(f0.size() == ctx.plan->levels[0].n, "commit_phase: oracle does not match P_0");
    ProverState st;
    st.challenges = challenges;
    st.oracles.resize(r + 1);
    st.oracles[0] = f0;
    for (unsigned i = 0; i < r; ++i)
        st.oracles[i + 1] = fold(ctx, i, st.oracles[i], challenges[i][0], challenges[i][1], threads);
    st.beta = st.oracles[r][0];
    return st;
}

// ---------- QUERY phase (direct oracle access) ----------

// One query test: sample Q_0, walk the projection path, check Eq.-(7.2)
// consistency at every round, and the final beta / membership value at the end.
// `read` is the oracle access (level, index) -> value; tests wrap it to count.
inline VerifierDecision query_phase_direct(const ProtocolContext& ctx,
                                           const std::function<Fe(size_t, size_t)>& read,
                                           const std::vector<std::array<Fe, 2>>& challenges, Fe beta,
                                           const std::vector<Fe>* final_table, u32 t,
                                           const std::function<u64(u64)>& sample_index) {
    const Field& K = *ctx.cf;
    unsigned r = ctx.rounds();
    const FoldingPlan& plan = *ctx.plan;
    for (u32 rep = 0; rep < t; ++rep) {
        u64 q0 = sample_index(plan.levels[0].n);
        // read the p_i fiber values along the projection path of Q_0; the value
        // f^(i+1)(Q_{i+1}) needed by round i sits inside round i+1's fiber
        std::vector<u64> targets(r);
        std::vector<std::vector<Fe>> vals(r);
        u64 q = q0;
        for (unsigned i = 0; i < r; ++i) {
            const LevelData& lv = plan.levels[i];
            u64 target = lv.proj[q];
            targets[i] = target;
            vals[i].resize(lv.p);
            for (u32 j = 0; j < lv.p; ++j) {
                Fe v = read(i, lv.fiber[target * lv.p + j]);
                vals[i][j] = (i == 0) ? ctx.lift0(v) : v;
            }
            q = target;
        }
        for (unsigned i = 0; i < r; ++i) {
            const LevelData& lv = plan.levels[i];
            std::vector<Fe> z1p(lv.p + 1), z2p(lv.p + 1);
            z1p[0] = z2p[0] = K.one();
            for (u32 j = 1; j <= lv.p; ++j) {
                z1p[j] = K.mul(z1p[j - 1], challenges[i][0]);
                z2p[j] = K.mul(z2p[j - 1], challenges[i][1]);
            }
            Fe folded = fold_at_point(ctx, i, vals[i].data(), targets[i], z1p.data(), z2p.data());
            Fe expected;
            if (i + 1 < r) {
                const LevelData& nlv = plan.levels[i + 1];
                u32 pos = nlv.p;
                for (u32 j = 0; j < nlv.p; ++j)
                    if (nlv.fiber[targets[i + 1] * nlv.p + j] == targets[i]) { pos = j; break; }
                require(pos < nlv.p, "query: fiber path broken", errc::internal);
                expected = vals[i + 1][pos];
            } else if (final_table) {
                expected = (*final_table)[targets[i]];
            } else {
                expected = beta;
            }
            if (!(folded == expected))
                return VerifierDecision::reject(VerifierDecision::Reason::round_consistency, int(i), int(rep),
                                                "fold mismatch at round " + std::to_string(i));
        }
    }
    if (final_table) {
        // membership of the final oracle in C_r, by rank against the terminal basis
        const LevelData& last = plan.levels[r];
        require(final_table->size() == last.n, "query_phase: final table size mismatch");
        std::vector<BasisFunction> basis = line_basis(last.deg);
        Matrix G(basis.size(), last.n);
        for (size_t b = 0; b < basis.size(); ++b)
            for (size_t c = 0; c < last.n; ++c) {
                BasisContext bc{ctx.base, nullptr};
                G.at(b, c) = ctx.lift0(evaluate_basis_function(bc, basis[b], last.domain.point(c), 1));
            }
        RowSpace rs(K, G);
        if (!rs.contains(*final_table))
            return VerifierDecision::reject(VerifierDecision::Reason::final_test, int(r), -1,
                                            "final oracle not in C_r");
    }
    return VerifierDecision::ok();
}

// ---------- transcripts ----------

struct RoundOpening {
    std::vector<Fe> values;                // p_i fiber values of f^(i)
    std::vector<std::vector<Digest>> paths;
};
struct QueryTranscript {
    u32 q0 = 0;
    std::vector<RoundOpening> rounds;  // r entries
};

struct Transcript {
    Digest plan_digest{};
    FinalMode final_mode = FinalMode::fold_to_constant;
    CoinMode coin_mode = CoinMode::fiat_shamir;
    QuerySampling sampling = QuerySampling::independent;
    bool extended_field = false;
    u64 seed = 0;
    u32 t = 0;
    std::vector<Digest> roots;                  // r roots: f^(0) .. f^(r-1)
    std::vector<std::array<Fe, 2>> challenges;  // r
    Fe beta{};
    std::vector<Fe> final_table;  // membership mode
    std::vector<QueryTranscript> queries;
};

namespace detail {

inline size_t merkle_depth(size_t n) {
    size_t cap = 1, d = 0;
    while (cap < n) { cap <<= 1; ++d; }
    return d;
}

// Challenge and query-point derivation shared by prover and verifier. In
// fiat-shamir mode everything is squeezed from the running sponge; in the
// interactive simulation a seeded public-coin stream plays the verifier.
struct CoinDriver {
    CoinMode mode;
    const Field* cf;
    FsChannel fs;
    Coins coins;

    CoinDriver(CoinMode m, const Field& challenge_field, const Digest& plan_digest, u64 seed)
        : mode(m), cf(&challenge_field), coins(seed) {
        if (mode == CoinMode::fiat_shamir) fs.absorb_digest(plan_digest);
    }
    void absorb_root(const Digest& d) {
        if (mode == CoinMode::fiat_shamir) fs.absorb_digest(d);
    }
    void absorb_final(const Fe* beta, const std::vector<Fe>* table, const Field& K) {
        if (mode != CoinMode::fiat_shamir) return;
        std::vector<u8> buf;
        if (beta) {
            buf.resize(K.byte_len());
            K.write(*beta, buf.data());
        } else {
            buf.resize(K.byte_len() * table->size());
            for (size_t i = 0; i < table->size(); ++i) K.write((*table)[i], buf.data() + i * K.byte_len());
        }
        fs.absorb(buf.data(), buf.size());
    }
    std::array<Fe, 2> challenge() {
        if (mode == CoinMode::fiat_shamir) return {fs.squeeze_field(*cf), fs.squeeze_field(*cf)};
        return {coins.field_element(*cf), coins.field_element(*cf)};
    }
    u64 index(u64 n) { return mode == CoinMode::fiat_shamir ? fs.squeeze_index(n) : coins.index(n); }

    std::vector<u32> query_points(u64 n0, u32 t, QuerySampling sampling) {
        std::vector<u32> qs(t);
        if (sampling == QuerySampling::independent) {
            for (u32 i = 0; i < t; ++i) qs[i] = u32(index(n0));
        } else {
            require(t <= n0, "query sampling without replacement needs t <= n_0");
            std::vector<u32> pool(n0);
            for (u64 i = 0; i < n0; ++i) pool[i] = u32(i);
            for (u32 i = 0; i < t; ++i) {
                u64 j = i + index(n0 - i);
                std::swap(pool[i], pool[j]);
                qs[i] = pool[i];
            }
        }
        return qs;
    }
};

}  // namespace detail

// ---------- prove ----------

// Runs COMMIT, commits every oracle in a hash tree, then assembles the QUERY
// openings into a self-contained transcript. Deterministic for a fixed seed.
inline Transcript prove(const ProtocolContext& ctx, const std::vector<Fe>& f0, u32 t, CoinMode coin_mode,
                        FinalMode final_mode, u64 seed = 0, QuerySampling sampling = QuerySampling::independent,
                        unsigned threads = 1) {
    const FoldingPlan& plan = *ctx.plan;
    unsigned r = ctx.rounds();
    require(t >= 1, "prove: t must be >= 1");
    Transcript tr;
    tr.plan_digest = plan.digest;
    tr.final_mode = final_mode;
    tr.coin_mode = coin_mode;
    tr.sampling = sampling;
    tr.extended_field = !ctx.emb.identity();
    tr.seed = (coin_mode == CoinMode::interactive_sim) ? seed : 0;
    tr.t = t;

    detail::CoinDriver drv(coin_mode, *ctx.cf, plan.digest, seed);
    std::vector<std::vector<Fe>> oracles(r + 1);
    std::vector<MerkleTree> trees(r);
    oracles[0] = f0;
    for (unsigned i = 0; i < r; ++i) {
        trees[i] = MerkleTree(ctx.oracle_field(i), u32(i), oracles[i]);
        tr.roots.push_back(trees[i].root());
        drv.absorb_root(trees[i].root());
        std::array<Fe, 2> z = drv.challenge();
        tr.challenges.push_back(z);
        oracles[i + 1] = fold(ctx, i, oracles[i], z[0], z[1], threads);
    }
    if (final_mode == FinalMode::fold_to_constant) {
        tr.beta = oracles[r][0];
        drv.absorb_final(&tr.beta, nullptr, *ctx.cf);
    } else {
        tr.final_table = oracles[r];
        drv.absorb_final(nullptr, &tr.final_table, *ctx.cf);
    }

    std::vector<u32> qs = drv.query_points(plan.levels[0].n, t, sampling);
    for (u32 rep = 0; rep < t; ++rep) {
        QueryTranscript q;
        q.q0 = qs[rep];
        u64 idx = q.q0;
        for (unsigned i = 0; i < r; ++i) {
            const LevelData& lv = plan.levels[i];
            u64 target = lv.proj[idx];
            RoundOpening op;
            for (u32 j = 0; j < lv.p; ++j) {
                u32 src = lv.fiber[target * lv.p + j];
                op.values.push_back(oracles[i][src]);
                op.paths.push_back(trees[i].open(src));
            }
            q.rounds.push_back(std::move(op));
            idx = target;
        }
        tr.queries.push_back(std::move(q));
    }
    return tr;
}

// ---------- verify ----------

// Verifies a transcript against the plan. `word` (the purported codeword) or
// `root0` binds the level-0 commitment; with neither, the transcript root is
// taken as the oracle binding (tests).
inline VerifierDecision verify(const ProtocolContext& ctx, const Transcript& tr,
                               const std::vector<Fe>* word = nullptr, const Digest* root0 = nullptr) {
    using R = VerifierDecision::Reason;
    const FoldingPlan& plan = *ctx.plan;
    const Field& K = *ctx.cf;
    unsigned r = ctx.rounds();

    if (!(tr.plan_digest == plan.digest))
        return VerifierDecision::reject(R::structure, -1, -1, "plan digest mismatch");
    if (tr.roots.size() != r || tr.challenges.size() != r || tr.queries.size() != tr.t || tr.t == 0)
        return VerifierDecision::reject(R::structure, -1, -1, "transcript shape mismatch");
    if (tr.extended_field != !ctx.emb.identity())
        return VerifierDecision::reject(R::structure, -1, -1, "challenge field mismatch");
    if (tr.final_mode == FinalMode::membership && tr.final_table.size() != plan.levels[r].n)
        return VerifierDecision::reject(R::structure, -1, -1, "final table size mismatch");

    // re-derive public coins
    detail::CoinDriver drv(tr.coin_mode, K, plan.digest, tr.seed);
    for (unsigned i = 0; i < r; ++i) {
        drv.absorb_root(tr.roots[i]);
        std::array<Fe, 2> z = drv.challenge();
        if (!(z[0] == tr.challenges[i][0] && z[1] == tr.challenges[i][1]))
            return VerifierDecision::reject(R::challenge_mismatch, int(i), -1,
                                            "recorded challenge does not match the public coins");
    }
    if (tr.final_mode == FinalMode::fold_to_constant)
        drv.absorb_final(&tr.beta, nullptr, K);
    else
        drv.absorb_final(nullptr, &tr.final_table, K);
    std::vector<u32> qs = drv.query_points(plan.levels[0].n, tr.t, tr.sampling);
    for (u32 rep = 0; rep < tr.t; ++rep)
        if (qs[rep] != tr.queries[rep].q0)
            return VerifierDecision::reject(R::challenge_mismatch, -1, int(rep),
                                            "query point does not match the public coins");

    // bind the level-0 oracle
    if (word != nullptr) {
        if (word->size() != plan.levels[0].n)
            return VerifierDecision::reject(R::structure, -1, -1, "word length mismatch");
        MerkleTree t0(*ctx.base, 0, *word);
        if (!(t0.root() == tr.roots[0]))
            return VerifierDecision::reject(R::commitment, 0, -1, "word does not match the committed root");
    } else if (root0 != nullptr) {
        if (!(*root0 == tr.roots[0]))
            return VerifierDecision::reject(R::commitment, 0, -1, "input commitment does not match");
    }

    // query tests
    for (u32 rep = 0; rep < tr.t; ++rep) {
        const QueryTranscript& q = tr.queries[rep];
        if (q.q0 >= plan.levels[0].n || q.rounds.size() != r)
            return VerifierDecision::reject(R::structure, -1, int(rep), "query transcript shape");
        u64 idx = q.q0;
        std::vector<std::vector<Fe>> lifted(r);
        for (unsigned i = 0; i < r; ++i) {
            const LevelData& lv = plan.levels[i];
            const Field& Fi = ctx.oracle_field(i);
            u64 target = lv.proj[idx];
            const RoundOpening& op = q.rounds[i];
            if (op.values.size() != lv.p || op.paths.size() != lv.p)
                return VerifierDecision::reject(R::structure, int(i), int(rep), "opening arity");
            for (u32 j = 0; j < lv.p; ++j) {
                u32 src = lv.fiber[target * lv.p + j];
                if (!MerkleTree::verify_path(Fi, u32(i), lv.n, src, op.values[j], op.paths[j], tr.roots[i]))
                    return VerifierDecision::reject(R::commitment, int(i), int(rep),
                                                    "authentication path failed at round " + std::to_string(i));
            }
            lifted[i].resize(lv.p);
            for (u32 j = 0; j < lv.p; ++j) lifted[i][j] = (i == 0) ? ctx.lift0(op.values[j]) : op.values[j];
            idx = target;
        }
        // round consistency along the path, reusing the next round's opened fiber
        idx = q.q0;
        for (unsigned i = 0; i < r; ++i) {
            const LevelData& lv = plan.levels[i];
            u64 target = lv.proj[idx];
            std::vector<Fe> z1p(lv.p + 1), z2p(lv.p + 1);
            z1p[0] = z2p[0] = K.one();
            for (u32 j = 1; j <= lv.p; ++j) {
                z1p[j] = K.mul(z1p[j - 1], tr.challenges[i][0]);
                z2p[j] = K.mul(z2p[j - 1], tr.challenges[i][1]);
            }
            Fe folded = fold_at_point(ctx, i, lifted[i].data(), target, z1p.data(), z2p.data());
            Fe expected;
            if (i + 1 < r) {
                const LevelData& nlv = plan.levels[i + 1];
                u64 t2 = nlv.proj[target];
                u32 pos = nlv.p;
                for (u32 j = 0; j < nlv.p; ++j)
                    if (nlv.fiber[t2 * nlv.p + j] == target) { pos = j; break; }
                if (pos == nlv.p)
                    return VerifierDecision::reject(R::structure, int(i), int(rep), "fiber path broken");
                expected = lifted[i + 1][pos];
            } else if (tr.final_mode == FinalMode::fold_to_constant) {
                expected = tr.beta;
            } else {
                expected = tr.final_table[target];
            }
            if (!(folded == expected))
                return VerifierDecision::reject(R::round_consistency, int(i), int(rep),
                                                "fold mismatch at round " + std::to_string(i));
            idx = target;
        }
    }

    if (tr.final_mode == FinalMode::membership) {
        const LevelData& last = plan.levels[r];
        std::vector<BasisFunction> basis = line_basis(last.deg);
        Matrix G(basis.size(), last.n);
        BasisContext bc{ctx.base, nullptr};
        for (size_t b = 0; b < basis.size(); ++b)
            for (size_t c = 0; c < last.n; ++c)
                G.at(b, c) = ctx.lift0(evaluate_basis_function(bc, basis[b], last.domain.point(c), 1));
        RowSpace rs(K, G);
        if (!rs.contains(tr.final_table))
            return VerifierDecision::reject(R::final_test, int(r), -1, "final oracle not in C_r");
    }
    return VerifierDecision::ok();
}

// ---------- binary proof format ----------
//
// magic "AGIP" | version u16 | plan digest 32B | base field spec | challenge
// field spec | mode byte | seed u64 | r u16 | t u32 | per-round (root 32B,
// z1, z2) | per-repetition query transcripts (q0 u32, values, paths) |
// trailing beta or final table. All integers little-endian.

namespace detail {

struct ByteWriter {
    std::vector<u8> out;
    void raw(const void* p, size_t n) {
        const u8* b = static_cast<const u8*>(p);
        out.insert(out.end(), b, b + n);
    }
    void u16le(u16 v) { for (int i = 0; i < 2; ++i) out.push_back(u8(v >> (8 * i))); }
    void u32le(u32 v) { for (int i = 0; i < 4; ++i) out.push_back(u8(v >> (8 * i))); }
    void u64le(u64 v) { for (int i = 0; i < 8; ++i) out.push_back(u8(v >> (8 * i))); }
    void fe(const Field& F, Fe v) {
        std::vector<u8> buf(F.byte_len());
        F.write(v, buf.data());
        raw(buf.data(), buf.size());
    }
    void digest(const Digest& d) { raw(d.data(), d.size()); }
};

struct ByteReader {
    const u8* p;
    size_t n, pos = 0;
    ByteReader(const u8* data, size_t len) : p(data), n(len) {}
    void need(size_t k) { require(pos + k <= n, "proof file truncated", errc::config); }
    void raw(void* out, size_t k) {
        need(k);
        std::memcpy(out, p + pos, k);
        pos += k;
    }
    u16 u16le() { u8 b[2]; raw(b, 2); return u16(b[0]) | u16(b[1]) << 8; }
    u32 u32le() { u8 b[4]; raw(b, 4); u32 v = 0; for (int i = 0; i < 4; ++i) v |= u32(b[i]) << (8 * i); return v; }
    u64 u64le() { u8 b[8]; raw(b, 8); u64 v = 0; for (int i = 0; i < 8; ++i) v |= u64(b[i]) << (8 * i); return v; }
    Fe fe(const Field& F) {
        std::vector<u8> buf(F.byte_len());
        raw(buf.data(), buf.size());
        return F.read(buf.data());
    }
    Digest digest() { Digest d; raw(d.data(), 32); return d; }
    bool done() const { return pos == n; }
};

inline void write_field_spec(ByteWriter& w, const Field& F) {
    w.u64le(F.p);
    w.u16le(u16(F.k));
    w.u16le(u16(F.modulus.size()));
    for (u64 c : F.modulus) w.u64le(c);
}
inline void check_field_spec(ByteReader& rd, const Field& F, const char* which) {
    u64 p = rd.u64le();
    u16 k = rd.u16le();
    u16 mc = rd.u16le();
    std::vector<u64> mod(mc);
    for (u16 i = 0; i < mc; ++i) mod[i] = rd.u64le();
    require(p == F.p && k == F.k && mod == F.modulus, std::string("proof file: ") + which + " field spec mismatch");
}

}  // namespace detail

inline std::vector<u8> transcript_to_bytes(const ProtocolContext& ctx, const Transcript& tr) {
    detail::ByteWriter w;
    unsigned r = ctx.rounds();
    w.raw("AGIP", 4);
    w.u16le(1);
    w.digest(tr.plan_digest);
    detail::write_field_spec(w, *ctx.base);
    detail::write_field_spec(w, *ctx.cf);
    u8 mode = u8(tr.final_mode == FinalMode::membership ? 1 : 0) | u8(tr.coin_mode == CoinMode::fiat_shamir ? 2 : 0) |
              u8(tr.extended_field ? 4 : 0) | u8(tr.sampling == QuerySampling::without_replacement ? 8 : 0);
    w.raw(&mode, 1);
    w.u64le(tr.seed);
    w.u16le(u16(r));
    w.u32le(tr.t);
    for (unsigned i = 0; i < r; ++i) {
        w.digest(tr.roots[i]);
        w.fe(*ctx.cf, tr.challenges[i][0]);
        w.fe(*ctx.cf, tr.challenges[i][1]);
    }
    for (const QueryTranscript& q : tr.queries) {
        w.u32le(q.q0);
        for (unsigned i = 0; i < r; ++i) {
            const Field& Fi = ctx.oracle_field(i);
            for (u32 j = 0; j < ctx.plan->levels[i].p; ++j) {
                w.fe(Fi, q.rounds[i].values[j]);
                for (const Digest& d : q.rounds[i].paths[j]) w.digest(d);
            }
        }
    }
    if (tr.final_mode == FinalMode::fold_to_constant)
        w.fe(*ctx.cf, tr.beta);
    else
        for (Fe v : tr.final_table) w.fe(*ctx.cf, v);
    return w.out;
}

inline Transcript transcript_from_bytes(const ProtocolContext& ctx, const std::vector<u8>& bytes) {
    detail::ByteReader rd(bytes.data(), bytes.size());
    char magic[4];
    rd.raw(magic, 4);
    require(std::memcmp(magic, "AGIP", 4) == 0, "proof file: bad magic");
    require(rd.u16le() == 1, "proof file: unsupported version");
    Transcript tr;
    tr.plan_digest = rd.digest();
    detail::check_field_spec(rd, *ctx.base, "base");
    detail::check_field_spec(rd, *ctx.cf, "challenge");
    u8 mode;
    rd.raw(&mode, 1);
    require((mode & 0xf0) == 0, "proof file: reserved mode bits set");
    tr.final_mode = (mode & 1) ? FinalMode::membership : FinalMode::fold_to_constant;
    tr.coin_mode = (mode & 2) ? CoinMode::fiat_shamir : CoinMode::interactive_sim;
    tr.extended_field = (mode & 4) != 0;
    tr.sampling = (mode & 8) ? QuerySampling::without_replacement : QuerySampling::independent;
    tr.seed = rd.u64le();
    require(tr.coin_mode != CoinMode::fiat_shamir || tr.seed == 0,
            "proof file: nonzero seed in a fiat-shamir transcript");
    unsigned r = rd.u16le();
    require(r == ctx.rounds(), "proof file: round count does not match the plan");
    tr.t = rd.u32le();
    require(tr.t >= 1 && tr.t <= (u32(1) << 24), "proof file: bad repetition count");
    for (unsigned i = 0; i < r; ++i) {
        Digest root = rd.digest();
        Fe z1 = rd.fe(*ctx.cf), z2 = rd.fe(*ctx.cf);
        tr.roots.push_back(root);
        tr.challenges.push_back({z1, z2});
    }
    for (u32 rep = 0; rep < tr.t; ++rep) {
        QueryTranscript q;
        q.q0 = rd.u32le();
        for (unsigned i = 0; i < r; ++i) {
            const Field& Fi = ctx.oracle_field(i);
            const LevelData& lv = ctx.plan->levels[i];
            RoundOpening op;
            size_t depth = detail::merkle_depth(lv.n);
            for (u32 j = 0; j < lv.p; ++j) {
                op.values.push_back(rd.fe(Fi));
                std::vector<Digest> path(depth);
                for (size_t dgt = 0; dgt < depth; ++dgt) path[dgt] = rd.digest();
                op.paths.push_back(std::move(path));
            }
            q.rounds.push_back(std::move(op));
        }
        tr.queries.push_back(std::move(q));
    }
    if (tr.final_mode == FinalMode::fold_to_constant) {
        tr.beta = rd.fe(*ctx.cf);
    } else {
        size_t n_r = ctx.plan->levels[r].n;
        tr.final_table.resize(n_r);
        for (size_t i = 0; i < n_r; ++i) tr.final_table[i] = rd.fe(*ctx.cf);
    }
    require(rd.done(), "proof file: trailing bytes");
    return tr;
}

}  // namespace agiopp
