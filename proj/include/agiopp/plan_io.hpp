#pragma once

#include <fstream>
#include <memory>

#include "json.hpp"
#include "validate.hpp"

namespace agiopp {

using Json = nlohmann::json;

// A plan plus the fields backing it (the plan holds pointers into these).
struct LoadedPlan {
    std::shared_ptr<Field> field;
    std::shared_ptr<Field> challenge_field;  // == field unless the config extends it
    FoldingPlan plan;

    const Field& F() const { return *field; }
    const Field& cf() const { return *challenge_field; }
};

inline u32 field_id(const Field& F) {
    auto spec = F.spec_bytes();
    Digest d = Sha256::hash(spec.data(), spec.size());
    return u32(d[0]) | u32(d[1]) << 8 | u32(d[2]) << 16 | u32(d[3]) << 24;
}

// ---------- EvalDomain / fiber-map serialization ----------

inline Json eval_domain_to_json(const Field& F, const EvalDomain& d) {
    Json j;
    j["coord_count"] = d.coord_count;
    Json pts = Json::array();
    for (size_t i = 0; i < d.size(); ++i) {
        Json p = Json::array();
        for (size_t c = 0; c < d.coord_count; ++c) {
            u128 code = F.to_uint(d.coords[i * d.coord_count + c]);
            require(code <= u128(~u64(0)), "domain serialization: element code exceeds 64 bits");
            p.push_back(u64(code));
        }
        pts.push_back(std::move(p));
    }
    j["points"] = std::move(pts);
    return j;
}

inline EvalDomain eval_domain_from_json(const Field& F, const Json& j) {
    EvalDomain d;
    d.coord_count = j.at("coord_count").get<size_t>();
    for (const Json& p : j.at("points"))
        for (const Json& c : p) d.coords.push_back(F.from_uint(c.get<u64>()));
    return d;
}

inline Json level_to_json(const Field& F, const LevelData& lv, bool embed_domains) {
    Json j;
    j["n"] = lv.n;
    j["dim"] = lv.dim;
    j["deg"] = lv.deg;
    j["delta"] = lv.delta.str();
    if (!lv.terminal()) {
        j["p"] = lv.p;
        if (embed_domains) j["fiber_map"] = lv.fiber;
    }
    if (embed_domains) j["domain"] = eval_domain_to_json(F, lv.domain);
    return j;
}

// ---------- config -> plan ----------

inline Rat rat_from_string(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rat(std::stoll(s));
    return Rat(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
}

// Builds the plan described by a config object. Precondition failures surface
// as errc::config errors with the violated clause in the message.
inline LoadedPlan build_plan_from_config(const Json& cfg) {
    LoadedPlan out;
    const Json& jf = cfg.at("field");
    out.field = std::make_shared<Field>(Field::make(jf.at("p").get<u64>(), jf.at("k").get<unsigned>()));
    const Field& F = *out.field;

    if (cfg.contains("challenge_field")) {
        const Json& jc = cfg.at("challenge_field");
        out.challenge_field =
            std::make_shared<Field>(Field::make(jc.at("p").get<u64>(), jc.at("k").get<unsigned>()));
    } else {
        out.challenge_field = out.field;
    }

    PlanOptions opt;
    if (cfg.contains("e_exponent")) opt.e_exponent = rat_from_string(cfg.at("e_exponent").get<std::string>());
    if (cfg.contains("tower_no_genus_bump")) opt.tower_no_genus_bump = cfg.at("tower_no_genus_bump").get<bool>();

    std::string family = cfg.at("family").get<std::string>();
    if (family == "kummer") {
        const Json& jc = cfg.at("curve");
        u64 N = jc.at("N").get<u64>();
        u64 m = jc.contains("roots") ? jc.at("roots").size() : jc.at("f_degree").get<u64>();
        // the congruence is checked before the roots are even needed, so
        // inconsistent configurations are named precisely
        require((m + 1) % N == 0, "plan config: m = " + u128_str(m) + " is not congruent to -1 mod N = " +
                                      u128_str(N) + " (foldability clause: compatible divisor sequence)");
        require(jc.contains("roots"), "plan config: kummer curve needs its root list");
        std::vector<Fe> roots;
        for (const Json& r : jc.at("roots")) roots.push_back(F.from_uint(r.get<u64>()));
        KummerCurve curve = KummerCurve::make(F, N, roots);

        Divisor D0;
        const Json& jd = cfg.at("divisor");
        D0.set(PointKey::inf(), jd.value("inf", i64(0)));
        if (jd.contains("roots")) {
            auto rc = jd.at("roots").get<std::vector<i64>>();
            require(rc.size() == curve.m(), "plan config: divisor root-coefficient count != m");
            for (size_t l = 0; l < rc.size(); ++l)
                if (rc[l]) D0.set(PointKey::root(u32(l + 1)), rc[l]);
        }

        size_t orbits = size_t(-1);
        if (cfg.contains("domain") && cfg.at("domain").contains("orbits") && cfg.at("domain").at("orbits").is_number())
            orbits = cfg.at("domain").at("orbits").get<size_t>();
        EvalDomain P0 = build_eval_domain(curve, orbits);
        out.plan = plan_kummer(F, curve, D0, P0, opt);
    } else if (family == "tower") {
        const Json& jc = cfg.at("curve");
        u64 q = jc.at("q").get<u64>();
        unsigned top = jc.at("level").get<unsigned>();
        TowerCurve t = TowerCurve::make(F, q);
        i64 d = cfg.at("divisor").at("d").get<i64>();
        std::vector<Fe> line;
        if (cfg.contains("domain") && cfg.at("domain").contains("line") && cfg.at("domain").at("line").is_array())
            for (const Json& x : cfg.at("domain").at("line")) line.push_back(F.from_uint(x.get<u64>()));
        out.plan = plan_tower(F, t, top, d, line, opt);
    } else if (family == "rs") {
        const Json& jd = cfg.at("domain");
        std::vector<Fe> pts;
        if (jd.contains("points")) {
            for (const Json& x : jd.at("points")) pts.push_back(F.from_uint(x.get<u64>()));
        } else {
            unsigned log_n = jd.at("log_n").get<unsigned>();
            Fe offset = jd.contains("offset") ? F.from_uint(jd.at("offset").get<u64>()) : F.one();
            pts = rs_coset_domain(F, log_n, offset);
        }
        out.plan = plan_rs(F, pts, cfg.at("divisor").at("d").get<i64>(), opt);
    } else {
        fail(errc::config, "plan config: unknown family '" + family + "'");
    }
    return out;
}

// ---------- plan file (config + derived data) ----------

inline Json plan_to_json(const LoadedPlan& lp, const Json& cfg) {
    const FoldingPlan& plan = lp.plan;
    Json j;
    j["config"] = cfg;
    Json derived;
    bool embed = plan.levels[0].n <= 4096;
    Json levels = Json::array();
    for (const LevelData& lv : plan.levels) levels.push_back(level_to_json(*plan.F, lv, embed));
    derived["levels"] = std::move(levels);
    derived["lambda"] = plan.lambda.str();
    derived["p_max"] = plan.p_max;
    derived["group_order"] = u128_str(plan.group_order);
    derived["proof_length"] = plan.proof_length();
    derived["digest"] = hex(plan.digest);
    j["derived"] = std::move(derived);
    return j;
}

// Load a plan file: rebuild from the config, then verify the derived data and
// digest match, so prover and verifier can never disagree on the plan.
inline LoadedPlan load_plan_file(const Json& file) {
    LoadedPlan lp = build_plan_from_config(file.at("config"));
    if (file.contains("derived")) {
        const Json& d = file.at("derived");
        require(d.at("digest").get<std::string>() == hex(lp.plan.digest),
                "plan file: derived digest does not match the reconstructed plan");
        const Json& levels = d.at("levels");
        require(levels.size() == lp.plan.levels.size(), "plan file: level count mismatch");
        for (size_t i = 0; i < levels.size(); ++i) {
            const LevelData& lv = lp.plan.levels[i];
            require(levels[i].at("n").get<u64>() == lv.n && levels[i].at("dim").get<u64>() == lv.dim &&
                        levels[i].at("deg").get<i64>() == lv.deg,
                    "plan file: level " + std::to_string(i) + " parameters mismatch");
            if (levels[i].contains("domain")) {
                EvalDomain dom = eval_domain_from_json(*lp.plan.F, levels[i].at("domain"));
                require(dom.coords == lv.domain.coords && dom.coord_count == lv.domain.coord_count,
                        "plan file: level " + std::to_string(i) + " embedded domain mismatch");
            }
            if (levels[i].contains("fiber_map"))
                require(levels[i].at("fiber_map").get<std::vector<u32>>() == lv.fiber,
                        "plan file: level " + std::to_string(i) + " fiber map mismatch");
        }
    }
    return lp;
}

inline Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    require(bool(in), "cannot open " + path);
    Json j;
    in >> j;
    return j;
}

inline void write_json_file(const std::string& path, const Json& j) {
    std::ofstream out(path);
    require(bool(out), "cannot open " + path + " for writing");
    out << j.dump(2) << "\n";
}

// ---------- word / message files ----------
// 8-byte header: magic "AGW1" then the field id (u32 LE), then flat LE elements.

inline void write_word_file(const std::string& path, const Field& F, const std::vector<Fe>& vals) {
    std::ofstream out(path, std::ios::binary);
    require(bool(out), "cannot open " + path + " for writing");
    out.write("AGW1", 4);
    u32 id = field_id(F);
    u8 idb[4];
    for (int i = 0; i < 4; ++i) idb[i] = u8(id >> (8 * i));
    out.write(reinterpret_cast<const char*>(idb), 4);
    std::vector<u8> buf(F.byte_len());
    for (Fe v : vals) {
        F.write(v, buf.data());
        out.write(reinterpret_cast<const char*>(buf.data()), std::streamsize(buf.size()));
    }
}

inline std::vector<Fe> read_word_file(const std::string& path, const Field& F) {
    std::ifstream in(path, std::ios::binary);
    require(bool(in), "cannot open " + path);
    char magic[4];
    in.read(magic, 4);
    require(in.gcount() == 4 && std::memcmp(magic, "AGW1", 4) == 0, "word file: bad magic");
    u8 idb[4];
    in.read(reinterpret_cast<char*>(idb), 4);
    u32 id = u32(idb[0]) | u32(idb[1]) << 8 | u32(idb[2]) << 16 | u32(idb[3]) << 24;
    require(id == field_id(F), "word file: field id does not match the plan's field");
    std::vector<Fe> vals;
    std::vector<u8> buf(F.byte_len());
    while (in.read(reinterpret_cast<char*>(buf.data()), std::streamsize(buf.size())))
        vals.push_back(F.read(buf.data()));
    require(in.gcount() == 0, "word file: truncated element");
    return vals;
}

inline std::vector<u8> read_binary_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    require(bool(in), "cannot open " + path);
    return std::vector<u8>((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

inline void write_binary_file(const std::string& path, const std::vector<u8>& data) {
    std::ofstream out(path, std::ios::binary);
    require(bool(out), "cannot open " + path + " for writing");
    out.write(reinterpret_cast<const char*>(data.data()), std::streamsize(data.size()));
}

}  // namespace agiopp
