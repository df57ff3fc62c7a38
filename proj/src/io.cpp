#include "lgp/io.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <unistd.h>

#include <json.hpp>

#include "lgp/error.hpp"

namespace lgp {

using nlohmann::json;

void write_file_atomic(const std::string& path, const std::string& bytes) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorKind::InvalidInput, "cannot write " + tmp.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) fail(ErrorKind::InvalidInput, "cannot write " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    fail(ErrorKind::InvalidInput, "cannot rename onto " + path + ": " + ec.message());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::InvalidInput, "cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

namespace {

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorKind::InvalidInput, std::string("malformed JSON: ") + e.what());
  }
}

template <class F>
auto guarded(F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    fail(ErrorKind::InvalidInput, std::string("unexpected document layout: ") + e.what());
  }
}

json bound_value(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }
double read_bound(const json& j, double if_null) { return j.is_null() ? if_null : j.get<double>(); }

json domain_json(const ConvexDomain& d) {
  if (d.is_disk()) return {{"type", "disk"}};
  json verts = json::array();
  for (const auto& p : d.vertices()) verts.push_back({p.x, p.y});
  return {{"type", "polygon"}, {"vertices", verts}};
}

ConvexDomain domain_from(const json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "disk") return ConvexDomain::unit_disk();
  if (type == "polygon") {
    std::vector<Point> pts;
    for (const auto& v : j.at("vertices")) pts.push_back({v.at(0).get<double>(), v.at(1).get<double>()});
    return ConvexDomain::convex_polygon(std::move(pts));
  }
  fail(ErrorKind::InvalidInput, "unknown domain type '" + type + "'");
}

json chord_json(const Chord& c) { return {c.a, c.b}; }
Chord chord_from(const json& j) { return make_chord(j.at(0).get<double>(), j.at(1).get<double>()); }

json chords_json(const std::vector<Chord>& cs) {
  json out = json::array();
  for (const auto& c : cs) out.push_back(chord_json(c));
  return out;
}

std::vector<Chord> chords_from(const json& j) {
  std::vector<Chord> out;
  for (const auto& c : j) out.push_back(chord_from(c));
  return out;
}

json pieces_json(const BoundaryData& h) {
  json out = json::array();
  for (const auto& p : h.pieces()) out.push_back({{"start_angle", p.start}, {"value", p.value}});
  return out;
}

BoundaryData pieces_from(const json& j) {
  std::vector<Piece> pieces;
  for (const auto& p : j) pieces.push_back({p.at("start_angle").get<double>(), p.at("value").get<double>()});
  return BoundaryData::from_pieces(std::move(pieces));
}

json tie_json(const TieRecord& t) {
  json ms = json::array();
  for (const auto& m : t.all_minimal_matchings) ms.push_back(chords_json(m));
  return {{"threshold", t.threshold}, {"length", t.length}, {"matchings", ms}};
}

TieRecord tie_from(const json& j) {
  TieRecord t;
  t.threshold = j.at("threshold").get<double>();
  t.length = j.at("length").get<double>();
  for (const auto& m : j.at("matchings")) t.all_minimal_matchings.push_back(chords_from(m));
  return t;
}

json solution_json(const PiecewiseSolution& u) {
  json faces = json::array();
  const auto& arr = u.arrangement();
  for (std::size_t f = 0; f < arr.face_count(); ++f) {
    const auto& face = arr.faces()[f];
    faces.push_back({{"interior", {face.interior.x, face.interior.y}}, {"value", u.face_values()[f]}});
  }
  json systems = json::array();
  for (const auto& s : u.chord_systems()) systems.push_back({{"threshold", s.threshold}, {"chords", chords_json(s.chords)}});
  json out = {{"domain", domain_json(u.domain())},
              {"chords", chords_json(arr.chords())},
              {"crossings", arr.has_crossings()},
              {"faces", faces},
              {"chord_systems", systems},
              {"tv_offset", u.tv_offset()},
              {"total_variation", total_variation(u)}};
  out["trace"] = u.trace() ? pieces_json(*u.trace()) : json(nullptr);
  return out;
}

PiecewiseSolution solution_from(const json& j) {
  const ConvexDomain domain = domain_from(j.at("domain"));
  Arrangement arr = Arrangement::build(domain, chords_from(j.at("chords")), j.value("crossings", false));
  const auto& faces = j.at("faces");
  if (faces.size() != arr.face_count()) fail(ErrorKind::InvalidInput, "face list does not match the chord arrangement");
  std::vector<double> values;
  for (const auto& f : faces) values.push_back(f.at("value").get<double>());
  std::optional<BoundaryData> trace;
  if (j.contains("trace") && !j.at("trace").is_null()) trace = pieces_from(j.at("trace"));
  PiecewiseSolution u(std::move(arr), std::move(values), std::move(trace), j.value("tv_offset", 0.0));
  std::vector<ChordSystem> systems;
  if (j.contains("chord_systems")) {
    for (const auto& s : j.at("chord_systems"))
      systems.push_back({s.at("threshold").get<double>(), chords_from(s.at("chords"))});
  }
  u.set_chord_systems(std::move(systems));
  return u;
}

const char* kind_name(Constraint::Kind k) {
  switch (k) {
    case Constraint::Kind::AtLeast: return "at_least";
    case Constraint::Kind::AtMost: return "at_most";
    case Constraint::Kind::AtLeastRegion: return "at_least_region";
  }
  return "";
}

Constraint::Kind kind_from(const std::string& s) {
  if (s == "at_least") return Constraint::Kind::AtLeast;
  if (s == "at_most") return Constraint::Kind::AtMost;
  if (s == "at_least_region") return Constraint::Kind::AtLeastRegion;
  fail(ErrorKind::InvalidInput, "unknown constraint kind '" + s + "'");
}

json family_json(const SolutionFamily& f) {
  json sides = json::array();
  for (const auto& s : f.sides)
    sides.push_back({{"chord", chord_json(s.chord)}, {"alpha", s.alpha}, {"length", s.length}, {"pinned_face", s.pinned_face}});
  json diags = json::array();
  for (const auto& [a, b] : f.diagonals) diags.push_back({a, b});
  json regions = json::array();
  for (const auto& r : f.regions) {
    json rs = json::array();
    for (const auto& s : r.sides) {
      json e = {{"kind", s.kind == RegionSide::Kind::Pinned ? "pinned" : "internal"},
                {"index", s.index},
                {"type", s.type == SideType::Lower ? "lower" : "upper"},
                {"length", s.length}};
      if (s.kind == RegionSide::Kind::Pinned) e["alpha"] = s.alpha; else e["neighbor"] = s.neighbor;
      rs.push_back(e);
    }
    regions.push_back({{"vertices", r.vertices}, {"area", r.area}, {"sides", rs}});
  }
  json cs = json::array();
  for (const auto& c : f.constraints) {
    json e = {{"text", c.to_string()}, {"kind", kind_name(c.kind)}, {"region", c.region}};
    if (c.kind == Constraint::Kind::AtLeastRegion) e["other"] = c.other; else e["value"] = c.value;
    cs.push_back(e);
  }
  json bounds = json::array();
  for (const auto& b : f.bounds) bounds.push_back({bound_value(b.lo), bound_value(b.hi)});
  return {{"component", f.component}, {"vertices", f.vertices}, {"sides", sides}, {"diagonals", diags},
          {"regions", regions}, {"constraints", cs}, {"bounds", bounds}, {"reference_tv", f.reference_tv}};
}

SolutionFamily family_from(const json& j) {
  SolutionFamily f;
  f.component = j.at("component").get<std::size_t>();
  f.vertices = j.at("vertices").get<std::vector<double>>();
  for (const auto& s : j.at("sides")) {
    f.sides.push_back({chord_from(s.at("chord")), s.at("alpha").get<double>(), s.at("length").get<double>(),
                       s.at("pinned_face").get<std::size_t>()});
  }
  for (const auto& d : j.at("diagonals")) f.diagonals.emplace_back(d.at(0).get<std::size_t>(), d.at(1).get<std::size_t>());
  for (const auto& r : j.at("regions")) {
    Region reg;
    reg.vertices = r.at("vertices").get<std::vector<std::size_t>>();
    reg.area = r.at("area").get<double>();
    for (const auto& s : r.at("sides")) {
      RegionSide side;
      side.kind = s.at("kind").get<std::string>() == "pinned" ? RegionSide::Kind::Pinned : RegionSide::Kind::Internal;
      side.index = s.at("index").get<std::size_t>();
      side.type = s.at("type").get<std::string>() == "lower" ? SideType::Lower : SideType::Upper;
      side.length = s.at("length").get<double>();
      if (side.kind == RegionSide::Kind::Pinned) side.alpha = s.at("alpha").get<double>();
      else side.neighbor = s.at("neighbor").get<std::size_t>();
      reg.sides.push_back(side);
    }
    f.regions.push_back(std::move(reg));
  }
  for (const auto& c : j.at("constraints")) {
    Constraint con;
    con.kind = kind_from(c.at("kind").get<std::string>());
    con.region = c.at("region").get<std::size_t>();
    if (con.kind == Constraint::Kind::AtLeastRegion) con.other = c.at("other").get<std::size_t>();
    else con.value = c.at("value").get<double>();
    f.constraints.push_back(con);
  }
  const double inf = std::numeric_limits<double>::infinity();
  for (const auto& b : j.at("bounds")) f.bounds.push_back({read_bound(b.at(0), -inf), read_bound(b.at(1), inf)});
  f.reference_tv = j.at("reference_tv").get<double>();
  return f;
}

json families_json(const std::vector<SolutionFamily>& fs) {
  json out = json::array();
  for (const auto& f : fs) out.push_back(family_json(f));
  return out;
}

std::vector<SolutionFamily> families_from(const json& j) {
  std::vector<SolutionFamily> out;
  for (const auto& f : j) out.push_back(family_from(f));
  return out;
}

json boundary_json(const std::vector<BoundaryPiece>& pieces) {
  json out = json::array();
  for (const auto& p : pieces) {
    json e = {{"start_angle", p.start}};
    if (p.constant()) e["value"] = p.coeffs[0]; else e["poly"] = p.coeffs;
    out.push_back(e);
  }
  return out;
}

std::vector<BoundaryPiece> boundary_from(const json& j) {
  std::vector<BoundaryPiece> out;
  for (const auto& p : j) {
    BoundaryPiece piece;
    piece.start = p.at("start_angle").get<double>();
    if (p.contains("value")) {
      piece.coeffs = {p.at("value").get<double>()};
    } else {
      piece.coeffs = p.at("poly").get<std::vector<double>>();
      if (piece.coeffs.size() != 6) fail(ErrorKind::InvalidInput, "polynomial pieces need 6 coefficients");
    }
    if (!std::all_of(piece.coeffs.begin(), piece.coeffs.end(), [](double c) { return std::isfinite(c); }))
      fail(ErrorKind::InvalidInput, "boundary data must be finite");
    out.push_back(std::move(piece));
  }
  if (out.empty()) fail(ErrorKind::InvalidInput, "boundary data needs at least one piece");
  return out;
}

}  // namespace

bool ProblemSpec::piecewise_constant() const {
  return std::all_of(boundary.begin(), boundary.end(), [](const BoundaryPiece& p) { return p.constant(); });
}

BoundaryData ProblemSpec::data() const {
  if (!piecewise_constant()) fail(ErrorKind::InvalidInput, "boundary data is not piecewise constant");
  std::vector<Piece> pieces;
  for (const auto& p : boundary) pieces.push_back({p.start, p.coeffs[0]});
  return BoundaryData::from_pieces(std::move(pieces));
}

BoundaryFunction ProblemSpec::function() const {
  if (piecewise_constant()) {
    auto h = std::make_shared<BoundaryData>(data());
    return [h](double theta) { return h->value_at(theta); };
  }
  auto pieces = boundary;
  for (auto& p : pieces) p.start = normalize_angle(p.start);
  std::sort(pieces.begin(), pieces.end(), [](const BoundaryPiece& a, const BoundaryPiece& b) { return a.start < b.start; });
  const ConvexDomain dom = domain;
  return [pieces, dom](double theta) {
    const double t = normalize_angle(theta);
    const BoundaryPiece* piece = &pieces.back();
    for (const auto& p : pieces) {
      if (p.start <= t) piece = &p;
    }
    const Point q = dom.boundary_point(t);
    const auto& c = piece->coeffs;
    if (piece->constant()) return c[0];
    return c[0] + c[1] * q.x + c[2] * q.y + c[3] * q.x * q.x + c[4] * q.x * q.y + c[5] * q.y * q.y;
  };
}

std::vector<Point> ProblemSpec::probe_polygon() const {
  std::vector<Point> out;
  for (double a : probe_vertices) out.push_back(domain.boundary_point(a));
  return out;
}

FamilyDocument FamilyDocument::from(const RegionGraph& graph, const FamilyEnumeration& result,
                                    const std::vector<TieRecord>& ties) {
  FamilyDocument doc;
  const auto& arr = graph.base.arrangement();
  for (const auto& p : graph.pinned) {
    RegionEntry e;
    e.face = p.face;
    e.value = p.value;
    for (const auto& edge : arr.faces()[p.face].boundary) {
      if (edge.kind == ArrangementEdge::Kind::Arc) e.vertex_angles.push_back(arr.arcs()[edge.index].start);
    }
    for (const auto& edge : arr.faces()[p.face].boundary) {
      if (edge.kind == ArrangementEdge::Kind::Arc) e.vertex_angles.push_back(normalize_angle(arr.arcs()[edge.index].end));
    }
    std::sort(e.vertex_angles.begin(), e.vertex_angles.end());
    e.vertex_angles.erase(std::unique(e.vertex_angles.begin(), e.vertex_angles.end()), e.vertex_angles.end());
    doc.regions.push_back(std::move(e));
  }
  for (const auto& c : graph.free_components) {
    for (std::size_t f : c.faces) {
      RegionEntry e;
      e.face = f;
      e.free = true;
      e.vertex_angles = c.vertices;
      e.value = graph.base.face_values()[f];
      doc.regions.push_back(std::move(e));
    }
  }
  std::sort(doc.regions.begin(), doc.regions.end(), [](const RegionEntry& a, const RegionEntry& b) { return a.face < b.face; });
  doc.families = result.families;
  doc.dropped = result.dropped;
  doc.rejected_candidates = result.rejected_candidates;
  doc.reference = graph.base;
  doc.ties = ties;
  return doc;
}

ProblemSpec parse_problem(const std::string& text) {
  const json j = parse_json(text);
  return guarded([&] {
    ProblemSpec s;
    s.name = j.value("name", "");
    s.domain = domain_from(j.at("domain"));
    s.boundary = boundary_from(j.at("boundary"));
    if (j.contains("probe_vertices")) s.probe_vertices = j.at("probe_vertices").get<std::vector<double>>();
    return s;
  });
}

std::string serialize(const ProblemSpec& spec) {
  json j = {{"name", spec.name}, {"domain", domain_json(spec.domain)}, {"boundary", boundary_json(spec.boundary)}};
  if (!spec.probe_vertices.empty()) j["probe_vertices"] = spec.probe_vertices;
  return j.dump(2) + "\n";
}

ImportedStructure parse_structure(const std::string& text) {
  const json j = parse_json(text);
  return guarded([&] {
    ImportedStructure s;
    s.name = j.value("name", "");
    s.domain = domain_from(j.at("domain"));
    s.free_vertices = j.at("free_vertices").get<std::vector<double>>();
    s.side_traces = j.at("side_traces").get<std::vector<double>>();
    if (j.contains("reference_regions")) {
      for (const auto& r : j.at("reference_regions"))
        s.reference_regions.push_back({r.at("vertices").get<std::vector<std::size_t>>(), r.at("value").get<double>()});
    }
    s.reference_value = j.value("reference_value", 0.0);
    s.tv_offset = j.value("tv_offset", 0.0);
    s.green_tolerance = j.value("green_tolerance", kGreenRelTol);
    s.validate();
    return s;
  });
}

std::string serialize(const ImportedStructure& s) {
  json regions = json::array();
  for (const auto& r : s.reference_regions) regions.push_back({{"vertices", r.vertices}, {"value", r.value}});
  json j = {{"name", s.name},
            {"domain", domain_json(s.domain)},
            {"free_vertices", s.free_vertices},
            {"side_traces", s.side_traces},
            {"reference_regions", regions},
            {"reference_value", s.reference_value},
            {"tv_offset", s.tv_offset},
            {"green_tolerance", s.green_tolerance}};
  return j.dump(2) + "\n";
}

PiecewiseSolution parse_solution(const std::string& text) {
  const json j = parse_json(text);
  return guarded([&] { return solution_from(j); });
}

std::string serialize(const PiecewiseSolution& u) { return solution_json(u).dump(2) + "\n"; }

FamilyDocument parse_family_document(const std::string& text) {
  const json j = parse_json(text);
  return guarded([&] {
    FamilyDocument doc;
    for (const auto& r : j.at("regions")) {
      RegionEntry e;
      e.face = r.at("face").get<std::size_t>();
      e.free = r.at("role").get<std::string>() == "free";
      e.vertex_angles = r.at("vertex_angles").get<std::vector<double>>();
      e.value = r.at("value").get<double>();
      doc.regions.push_back(std::move(e));
    }
    doc.families = families_from(j.at("families"));
    doc.dropped = families_from(j.at("dropped_families"));
    doc.rejected_candidates = j.at("rejected_candidates").get<std::size_t>();
    if (!j.at("reference").is_null()) doc.reference = solution_from(j.at("reference"));
    for (const auto& t : j.at("ties")) doc.ties.push_back(tie_from(t));
    return doc;
  });
}

std::string serialize(const FamilyDocument& doc) {
  json regions = json::array();
  for (const auto& r : doc.regions) {
    regions.push_back({{"face", r.face},
                       {"role", r.free ? "free" : "pinned"},
                       {"vertex_angles", r.vertex_angles},
                       {"value", r.value}});
  }
  json ties = json::array();
  for (const auto& t : doc.ties) ties.push_back(tie_json(t));
  json j = {{"regions", regions},
            {"families", families_json(doc.families)},
            {"dropped_families", families_json(doc.dropped)},
            {"rejected_candidates", doc.rejected_candidates},
            {"ties", ties}};
  j["reference"] = doc.reference ? solution_json(*doc.reference) : json(nullptr);
  return j.dump(2) + "\n";
}

}  // namespace lgp
