#include "bloch/json_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "bloch/errors.hpp"

namespace bloch::io {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) { throw ParseError(path + ": " + msg); }

const Json& field(const Json& j, const char* key, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(path, std::string("missing field \"") + key + "\"");
  return *it;
}

double number(const Json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

std::vector<Complex> complex_list(const Json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected a list of [re, im] pairs");
  std::vector<Complex> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(complex_from_json(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

Json complex_list_json(const std::vector<Complex>& v) {
  Json a = Json::array();
  for (const auto& c : v) a.push_back(to_json(c));
  return a;
}

// Library preconditions met while building an expression are input errors here.
template <class F>
auto guarded(const std::string& path, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    fail(path, e.what());
  }
}

const char* kind_name(HoloExpr::Kind k) {
  switch (k) {
    case HoloExpr::Kind::monomial: return "monomial";
    case HoloExpr::Kind::extremal: return "extremal";
    case HoloExpr::Kind::sum: return "sum";
    case HoloExpr::Kind::scale: return "scale";
    case HoloExpr::Kind::precompose_mobius: return "precompose_mobius";
    case HoloExpr::Kind::tensor: return "tensor";
    case HoloExpr::Kind::taylor: return "taylor";
  }
  return "?";
}

}  // namespace

Complex complex_from_json(const Json& j, const std::string& path) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    fail(path, "expected a complex number [re, im]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

Json to_json(Complex c) { return Json::array({c.real(), c.imag()}); }

Json real_to_json(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

DiscPoint point_from_json(const Json& j, const std::string& path) {
  const Complex z = complex_from_json(j, path);
  if (!(std::abs(z) < 1.0)) {
    std::ostringstream os;
    os.precision(17);
    os << "|z| = " << std::abs(z) << " is not inside the open unit disc";
    fail(path, os.str());
  }
  return DiscPoint(z);
}

std::vector<DiscPoint> points_from_json(const Json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected a list of points");
  std::vector<DiscPoint> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(point_from_json(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

Json to_json(DiscPoint z) { return to_json(z.value()); }

Json to_json(const std::vector<DiscPoint>& zs) {
  Json a = Json::array();
  for (const auto& z : zs) a.push_back(to_json(z));
  return a;
}

HoloExpr holo_from_json(const Json& j, const std::string& path) {
  const Json& kj = field(j, "kind", path);
  if (!kj.is_string()) fail(path + ".kind", "expected a string");
  const std::string kind = kj.get<std::string>();
  if (kind == "monomial") {
    const Json& k = field(j, "k", path);
    if (!k.is_number_integer()) fail(path + ".k", "expected an integer degree");
    return guarded(path, [&] { return HoloExpr::monomial(k.get<int>()); });
  }
  if (kind == "extremal") return HoloExpr::extremal(point_from_json(field(j, "a", path), path + ".a"));
  if (kind == "sum") {
    const Json& cs = field(j, "children", path);
    if (!cs.is_array()) fail(path + ".children", "expected a list");
    std::vector<HoloExpr> children;
    for (std::size_t i = 0; i < cs.size(); ++i) {
      children.push_back(holo_from_json(cs[i], path + ".children[" + std::to_string(i) + "]"));
    }
    return guarded(path, [&] { return HoloExpr::sum(std::move(children)); });
  }
  if (kind == "scale") {
    const Complex c = complex_from_json(field(j, "coef", path), path + ".coef");
    return HoloExpr::scale(c, holo_from_json(field(j, "child", path), path + ".child"));
  }
  if (kind == "precompose_mobius") {
    const Complex rot = complex_from_json(field(j, "rotation", path), path + ".rotation");
    const DiscPoint center = point_from_json(field(j, "center", path), path + ".center");
    const MobiusMap phi = guarded(path + ".rotation", [&] { return MobiusMap(rot, center); });
    return HoloExpr::precompose(phi, holo_from_json(field(j, "child", path), path + ".child"));
  }
  if (kind == "tensor") {
    auto x = complex_list(field(j, "x", path), path + ".x");
    HoloExpr child = holo_from_json(field(j, "child", path), path + ".child");
    return guarded(path, [&] { return HoloExpr::tensor(child, std::move(x)); });
  }
  if (kind == "taylor") {
    auto coeffs = complex_list(field(j, "coeffs", path), path + ".coeffs");
    const double radius = j.contains("radius") ? number(j["radius"], path + ".radius") : 0.95;
    return guarded(path, [&] { return HoloExpr::taylor(std::move(coeffs), radius); });
  }
  fail(path + ".kind", "unknown node kind \"" + kind + "\"");
}

Json to_json(const HoloExpr& f) {
  Json j;
  j["kind"] = kind_name(f.kind());
  switch (f.kind()) {
    case HoloExpr::Kind::monomial: j["k"] = f.degree(); break;
    case HoloExpr::Kind::extremal: j["a"] = to_json(f.center()); break;
    case HoloExpr::Kind::sum: {
      Json cs = Json::array();
      for (const auto& c : f.children()) cs.push_back(to_json(c));
      j["children"] = cs;
      break;
    }
    case HoloExpr::Kind::scale:
      j["coef"] = to_json(f.coefficient());
      j["child"] = to_json(f.child());
      break;
    case HoloExpr::Kind::precompose_mobius:
      j["rotation"] = to_json(f.map().rotation());
      j["center"] = to_json(f.map().center());
      j["child"] = to_json(f.child());
      break;
    case HoloExpr::Kind::tensor:
      j["x"] = complex_list_json(f.vector());
      j["child"] = to_json(f.child());
      break;
    case HoloExpr::Kind::taylor:
      j["coeffs"] = complex_list_json(f.coefficients());
      j["radius"] = f.radius();
      break;
  }
  return j;
}

WeightedSample sample_from_json(const Json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected a list of {\"lambda\", \"z\"} entries");
  if (j.empty()) fail(path, "a sample needs at least one entry");
  std::vector<SampleEntry> entries;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string p = path + "[" + std::to_string(i) + "]";
    entries.push_back({complex_from_json(field(j[i], "lambda", p), p + ".lambda"),
                       point_from_json(field(j[i], "z", p), p + ".z")});
  }
  return WeightedSample(std::move(entries));
}

Json to_json(const WeightedSample& s) {
  Json a = Json::array();
  for (const auto& e : s.entries()) a.push_back({{"lambda", to_json(e.lambda)}, {"z", to_json(e.z)}});
  return a;
}

NormKind norm_from_json(const Json& j, const std::string& path) {
  if (j.is_string()) {
    if (j == "euclidean") return NormKind::euclidean;
    if (j == "sup") return NormKind::sup;
  }
  fail(path, "norm must be \"euclidean\" or \"sup\"");
}

std::string norm_name(NormKind n) { return n == NormKind::sup ? "sup" : "euclidean"; }

Molecule molecule_from_json(const Json& j, NormKind norm, const std::string& path) {
  if (!j.is_array()) fail(path, "expected a list of {\"lambda\", \"z\", \"x\"} atoms");
  std::vector<Atom> atoms;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string p = path + "[" + std::to_string(i) + "]";
    atoms.push_back({complex_from_json(field(j[i], "lambda", p), p + ".lambda"),
                     point_from_json(field(j[i], "z", p), p + ".z"), complex_list(field(j[i], "x", p), p + ".x")});
  }
  if (atoms.empty()) return Molecule({}, 1, norm);
  return guarded(path, [&] { return Molecule(std::move(atoms), atoms.front().x.size(), norm); });
}

Json to_json(const Molecule& m) {
  Json a = Json::array();
  for (const auto& at : m.atoms()) {
    a.push_back({{"lambda", to_json(at.lambda)}, {"z", to_json(at.z)}, {"x", complex_list_json(at.x)}});
  }
  return a;
}

TestFamily family_from_json(const Json& j, const std::string& path, bool unchecked) {
  const Json& ms = field(j, "members", path);
  const Json& cs = field(j, "certificates", path);
  if (!ms.is_array() || !cs.is_array()) fail(path, "members and certificates must be lists");
  if (ms.size() != cs.size()) fail(path, "members and certificates have different lengths");
  const Json* prov = j.contains("provenance") ? &j["provenance"] : nullptr;
  std::vector<FamilyMember> members;
  for (std::size_t i = 0; i < ms.size(); ++i) {
    const std::string idx = "[" + std::to_string(i) + "]";
    std::string pv = "file" + idx;
    if (prov && prov->is_array() && i < prov->size() && (*prov)[i].is_string()) pv = (*prov)[i].get<std::string>();
    members.push_back({holo_from_json(ms[i], path + ".members" + idx),
                       number(cs[i], path + ".certificates" + idx), pv});
  }
  if (unchecked) return TestFamily::unchecked(std::move(members));
  TestFamily fam;
  for (std::size_t i = 0; i < members.size(); ++i) {
    try {
      fam.add(members[i].expr, members[i].certificate, members[i].provenance);
    } catch (const InvalidArgument& e) {
      fail(path + ".members[" + std::to_string(i) + "]", e.what());
    }
  }
  return fam;
}

Json to_json(const TestFamily& family) {
  Json ms = Json::array();
  Json cs = Json::array();
  Json ps = Json::array();
  for (const auto& m : family.members()) {
    ms.push_back(to_json(m.expr));
    cs.push_back(m.certificate);
    ps.push_back(m.provenance);
  }
  return {{"members", ms}, {"certificates", cs}, {"provenance", ps}};
}

Json to_json(const CertBracket& b) {
  return {{"lower", real_to_json(b.lower)},
          {"upper", real_to_json(b.upper)},
          {"lower_method", b.lower_method},
          {"upper_method", b.upper_method},
          {"witness", to_json(b.witness)},
          {"width", real_to_json(b.width())}};
}

Json to_json(const SummingEstimate& s) {
  return {{"p", real_to_json(s.p)},
          {"numerator", real_to_json(s.numerator)},
          {"denominator_family", real_to_json(s.denominator_family)},
          {"denominator_closed_form", real_to_json(s.denominator_closed_form)},
          {"certified_lower", real_to_json(s.certified_lower)},
          {"heuristic_ratio", real_to_json(s.heuristic_ratio)},
          {"witnesses", {{"denominator_member", s.denominator_member}, {"numerator_entry", s.numerator_entry}}}};
}

Json to_json(const PietschMeasure& m) {
  return {{"p", real_to_json(m.p)},
          {"constant", real_to_json(m.constant)},
          {"lp_value", real_to_json(m.lp_value)},
          {"weights", m.weights},
          {"pivots", m.pivots}};
}

Json to_json(const DualityReport& d) {
  return {{"primal_value", real_to_json(d.primal_value)},
          {"dual_value", real_to_json(d.dual_value)},
          {"relative_gap", real_to_json(d.relative_gap)},
          {"constant", real_to_json(d.constant)},
          {"dual_weights", d.dual_weights},
          {"witness", to_json(d.witness)},
          {"witness_ratio", real_to_json(d.witness_ratio)},
          {"witness_ratio_gap", real_to_json(d.witness_ratio_gap)},
          {"pass", d.pass}};
}

Json to_json(const DominationReport& d) {
  Json es = Json::array();
  for (const auto& e : d.entries) {
    es.push_back({{"z", to_json(e.z)},
                  {"lhs", real_to_json(e.lhs)},
                  {"rhs", real_to_json(e.rhs)},
                  {"margin", real_to_json(e.margin)}});
  }
  return {{"entries", es}, {"worst_margin", real_to_json(d.worst_margin)}, {"violations", d.violations}};
}

Json to_json(const FactorizationCertificate& c) {
  Json rows = Json::array();
  for (const auto& r : c.operator_matrix) rows.push_back(complex_list_json(r));
  return {{"points", to_json(c.points)},
          {"active_members", c.active_members},
          {"operator_matrix", rows},
          {"residual", real_to_json(c.residual)},
          {"operator_norm_estimate", real_to_json(c.operator_norm_estimate)},
          {"constant", real_to_json(c.measure.constant)}};
}

Json to_json(const MaureyReport& r) {
  Json stages = Json::array();
  for (const auto& s : r.stages) {
    stages.push_back({{"weights", s.weights},
                      {"constant", real_to_json(s.constant)},
                      {"worst_interpolation_margin", real_to_json(s.worst_interpolation_margin)},
                      {"worst_holder_margin", real_to_json(s.worst_holder_margin)},
                      {"worst_domination_margin", real_to_json(s.worst_domination_margin)}});
  }
  return {{"p", real_to_json(r.p)},
          {"q", real_to_json(r.q)},
          {"depth", r.depth},
          {"theta", real_to_json(r.theta)},
          {"theta_consistency", real_to_json(r.theta_consistency)},
          {"initial_constant", real_to_json(r.initial_constant)},
          {"c_max", real_to_json(r.c_max)},
          {"big_c", real_to_json(r.big_c)},
          {"truncation_mass", real_to_json(r.truncation_mass)},
          {"truncation_remainder", real_to_json(r.truncation_remainder)},
          {"stages", stages},
          {"mixture", r.mixture},
          {"worst_interpolation_margin", real_to_json(r.worst_interpolation_margin)},
          {"worst_holder_margin", real_to_json(r.worst_holder_margin)},
          {"worst_final_margin", real_to_json(r.worst_final_margin)},
          {"worst_function_margin", real_to_json(r.worst_function_margin)}};
}

Json to_json(const Sandwich& s, const std::vector<Probe>& probes) {
  Json w;
  w["upper_representation"] = to_json(s.upper_representation.molecule);
  w["moves"] = s.upper_representation.moves;
  if (s.lower > 0.0 && s.lower_probe < probes.size()) {
    const auto& pr = probes[s.lower_probe];
    w["lower_probe"] = {{"g", to_json(pr.g)},
                        {"certificate", pr.certificate},
                        {"functional", complex_list_json(pr.functional)},
                        {"provenance", pr.provenance}};
  }
  return {{"lower", real_to_json(s.lower)}, {"upper", real_to_json(s.upper)}, {"witnesses", w}};
}

Json read_file(const std::string& filename) {
  std::ifstream in(filename);
  if (!in) throw ParseError(filename + ": cannot open file");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ParseError(filename + ": " + e.what());
  }
}

Json read_inline_or_file(const std::string& text) {
  const auto pos = text.find_first_not_of(" \t\r\n");
  if (pos != std::string::npos && (text[pos] == '{' || text[pos] == '[')) {
    try {
      return Json::parse(text);
    } catch (const Json::parse_error& e) {
      throw ParseError(std::string("inline JSON: ") + e.what());
    }
  }
  return read_file(text);
}

}  // namespace bloch::io
