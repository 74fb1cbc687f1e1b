#include "nikodym/report.hpp"

#include "nikodym/error.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>

namespace nikodym {

namespace {

std::string hex64(std::uint64_t v)
{
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i, v >>= 4)
        s[static_cast<std::size_t>(i)] = digits[v & 0xf];
    return s;
}

json repairs_json(const std::vector<RepairChoice>& repairs)
{
    json arr = json::array();
    for (const auto& r : repairs)
        arr.push_back({{"point", r.point}, {"direction", r.direction}, {"missing", r.missing}});
    return arr;
}

} // namespace

json to_json(const Threshold& t)
{
    return {{"probability", t.probability}, {"threshold", t.value}, {"saturated", t.saturated}};
}

json to_json(const FieldCtx& f)
{
    return {{"p", f.p()}, {"m", f.m()}, {"q", f.q()}, {"modulus", f.spec().modulus},
            {"canonical_modulus", f.canonical_modulus()}};
}

json to_json(const ConstructionParams& p)
{
    return {{"eps", p.eps}, {"c_const", p.c_const}, {"seed", p.seed}, {"max_retries", p.max_retries}};
}

json to_json(const InhomQuadratic& q)
{
    return {{"quad", q.quad}, {"lin", q.lin}, {"const", q.cst}};
}

json to_json(const Direction& d) { return {{"ordinal", d.ordinal}, {"rep", d.rep}}; }

json to_json(const RandomTrace& t)
{
    json attempts = json::array();
    for (const auto& a : t.attempts)
        attempts.push_back({{"attempt", a.attempt}, {"sub_seed", a.sub_seed}, {"size", a.size}, {"failures", a.failures}});
    return {{"inclusion", to_json(t.inclusion)}, {"attempts", attempts}};
}

json to_json(const PipelineTrace& t)
{
    json quadrics = json::array();
    for (const auto& q : t.quadrics)
        quadrics.push_back(to_json(q));
    json pairs = json::array();
    for (const auto& p : t.pair_intersections)
        pairs.push_back({{"i", p.i}, {"j", p.j}, {"size", p.size}});
    return {
        {"k", t.k},
        {"quadrics", quadrics},
        {"variety_sizes", t.variety_sizes},
        {"pair_intersections", pairs},
        {"union_varieties_size", t.union_varieties_size},
        {"W_size", t.W_size},
        {"W_on_union_size", t.W_on_union_size},
        {"N_doubleprime_size", t.N_doubleprime_size},
        {"N_prime_size", t.N_prime_size},
        {"w_threshold", to_json(t.w_threshold)},
        {"thinning_threshold", to_json(t.thinning_threshold)},
        {"robust_threshold", t.robust_threshold},
        {"robust_deficient_points", t.robust_deficient_points},
        {"failures_before_repair", t.failures_before_repair},
        {"repaired_points", repairs_json(t.repaired_points)},
        {"added_points_count", t.added_points_count},
        {"final_size", t.final_size},
        {"retries_used", t.retries_used},
        {"rng_transcript_digest", hex64(t.rng_transcript_digest)},
    };
}

json to_json(const ParabolaTrace& t)
{
    return {
        {"base_size", t.base_size},
        {"augmentation", to_json(t.augmentation)},
        {"augmentation_saturated", t.augmentation_saturated},
        {"augmented_count", t.augmented_count},
        {"failures_before_repair", t.failures_before_repair},
        {"repaired_points", repairs_json(t.repaired_points)},
        {"repair_added_count", t.repair_added_count},
        {"final_size", t.final_size},
    };
}

json to_json(const KakeyaTransformTrace& t, bool include_witnesses)
{
    json j = {
        {"normal", to_json(t.normal)},
        {"translate", t.translate},
        {"parallel_witness_count", t.parallel_witness_count},
        {"exceptional_set_size", t.exceptional_set_size},
        {"N_size", t.N_size},
        {"K_size", t.K_size},
        {"eb_bound", t.eb_bound},
        {"bound_rhs", t.bound_rhs},
        {"eb_holds", t.eb_holds},
        {"kb_holds", t.kb_holds},
        {"kakeya_ok", t.kakeya_ok},
    };
    if (include_witnesses)
        j["witness_directions"] = t.witness_directions;
    return j;
}

json to_json(const BoundsReport& b)
{
    return {
        {"q", b.q},
        {"d", b.d},
        {"perfect_square", b.perfect_square},
        {"d_at_least_3", b.d_at_least_3},
        {"projective_size", b.projective_size},
        {"kakeya_plane_exact", b.kakeya_plane_exact},
        {"szonyi_lower", b.szonyi_lower},
        {"qtor_upper_main", b.qtor_upper_main},
        {"bukh_chao_lower", b.bukh_chao_lower},
        {"bukh_chao_upper_main", b.bukh_chao_upper_main},
        {"nikodym_from_kakeya_lower", b.nikodym_from_kakeya_lower},
        {"nik_easy_main", b.nik_easy_main},
        {"nik_conj_main", b.nik_conj_main},
        {"nik_conj2_main", b.nik_conj2_main},
    };
}

json to_json(const DerangementStats& s)
{
    return {{"D", s.D}, {"q", s.q}, {"trials", s.trials}, {"rootless", s.rootless},
            {"rootless_fraction", s.rootless_fraction}, {"delta_D", s.delta_D}, {"exact_fraction", s.exact_fraction}};
}

json to_json(const MomentStats& s)
{
    return {{"q", s.q}, {"d", s.d}, {"k", s.k}, {"trials", s.trials},
            {"mode", s.mode == MomentMode::Unconstrained ? "unconstrained" : "exclude-perfect-squares"},
            {"sample_mean", s.sample_mean}, {"sample_variance", s.sample_variance},
            {"exact_mean", s.exact_mean}, {"exact_variance", s.exact_variance}};
}

json to_json(const LangWeilStats& s)
{
    return {{"trials", s.trials}, {"min_size", s.min_size}, {"max_size", s.max_size}, {"mean_size", s.mean_size},
            {"center", s.center}, {"envelope", s.envelope}, {"outside_envelope", s.outside_envelope},
            {"rejections", s.rejections}};
}

json to_json(const IrreducibleStats& s)
{
    return {{"trials", s.trials}, {"irreducible", s.irreducible}, {"fraction", s.fraction}};
}

json nikodym_summary(const NikodymReport& r)
{
    json j = {{"ok", r.ok}, {"failure_count", r.failures.size()}, {"failures", r.failures}};
    if (r.robust_counts && !r.robust_counts->empty()) {
        const auto& c = *r.robust_counts;
        const double sum = std::accumulate(c.begin(), c.end(), 0.0);
        j["robust"] = {{"min", *std::min_element(c.begin(), c.end())},
                       {"max", *std::max_element(c.begin(), c.end())},
                       {"mean", sum / static_cast<double>(c.size())},
                       {"total_incidences", static_cast<std::uint64_t>(sum)}};
    }
    return j;
}

json kakeya_summary(const KakeyaReport& r)
{
    return {{"ok", r.ok}, {"failure_count", r.failures.size()}, {"failures", r.failures}};
}

json run_report(const std::string& command, const Geometry& geom)
{
    return {{"tool", kToolName}, {"version", kToolVersion}, {"schema", kReportSchema},
            {"command", command}, {"field", to_json(geom.field())}, {"d", geom.dim()},
            {"num_points", geom.num_points()}};
}

void write_json(const std::string& path, const json& j)
{
    std::ofstream out(path, std::ios::trunc);
    if (!out)
        throw Error(Errc::IoError, "cannot open " + path + " for writing");
    out << j.dump(2) << '\n';
}

} // namespace nikodym
