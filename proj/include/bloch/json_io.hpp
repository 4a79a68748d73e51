#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "bloch/bloch_norms.hpp"
#include "bloch/holo_expr.hpp"
#include "bloch/molecules.hpp"
#include "bloch/summing.hpp"

namespace bloch::io {

using Json = nlohmann::json;

/// Every reader throws ParseError naming the offending JSON path.
Complex complex_from_json(const Json& j, const std::string& path);
Json to_json(Complex c);
/// Finite values as numbers, infinities as the strings "inf" / "-inf".
Json real_to_json(double v);

DiscPoint point_from_json(const Json& j, const std::string& path);
std::vector<DiscPoint> points_from_json(const Json& j, const std::string& path = "points");
Json to_json(DiscPoint z);
Json to_json(const std::vector<DiscPoint>& zs);

HoloExpr holo_from_json(const Json& j, const std::string& path = "function");
Json to_json(const HoloExpr& f);

WeightedSample sample_from_json(const Json& j, const std::string& path = "sample");
Json to_json(const WeightedSample& s);

/// {"norm": "euclidean"|"sup"} is read from the enclosing document by callers.
NormKind norm_from_json(const Json& j, const std::string& path);
std::string norm_name(NormKind n);

Molecule molecule_from_json(const Json& j, NormKind norm, const std::string& path = "molecule");
Json to_json(const Molecule& m);

/// {"members": [HoloExpr...], "certificates": [...], "provenance": [...]?}
/// Members go through TestFamily::add, so certificates above 1 raise
/// CertificationFailure; `unchecked` skips that validation.
TestFamily family_from_json(const Json& j, const std::string& path = "family", bool unchecked = false);
Json to_json(const TestFamily& family);

Json to_json(const CertBracket& b);
Json to_json(const SummingEstimate& s);
Json to_json(const PietschMeasure& m);
Json to_json(const DualityReport& d);
Json to_json(const DominationReport& d);
Json to_json(const FactorizationCertificate& c);
Json to_json(const MaureyReport& r);
Json to_json(const Sandwich& s, const std::vector<Probe>& probes);

Json read_file(const std::string& filename);
/// A JSON document given either inline (starts with '{' or '[') or as a file name.
Json read_inline_or_file(const std::string& text);

}  // namespace bloch::io
