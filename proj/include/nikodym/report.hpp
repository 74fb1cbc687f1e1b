#pragma once

// Machine-readable run reports. Everything here is deterministic so two
// runs with the same arguments serialize to identical bytes.

#include "nikodym/constructions.hpp"
#include "nikodym/experiments.hpp"
#include "nikodym/verify.hpp"

#include <nlohmann/json.hpp>

#include <string>

namespace nikodym {

inline constexpr const char* kToolName = "nikodym";
inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr int kReportSchema = 1;

using json = nlohmann::ordered_json;

json to_json(const Threshold& t);
json to_json(const FieldCtx& f);
json to_json(const ConstructionParams& p);
json to_json(const InhomQuadratic& q);
json to_json(const Direction& d);
json to_json(const RandomTrace& t);
json to_json(const PipelineTrace& t);
json to_json(const ParabolaTrace& t);
json to_json(const KakeyaTransformTrace& t, bool include_witnesses = false);
json to_json(const BoundsReport& b);
json to_json(const DerangementStats& s);
json to_json(const MomentStats& s);
json to_json(const LangWeilStats& s);
json to_json(const IrreducibleStats& s);

/// Summary of a Nikodym report: ok, failure count and list, robust stats.
json nikodym_summary(const NikodymReport& r);
json kakeya_summary(const KakeyaReport& r);

/// Skeleton shared by every command: tool, version, schema, command, field, d.
json run_report(const std::string& command, const Geometry& geom);

void write_json(const std::string& path, const json& j);

} // namespace nikodym
