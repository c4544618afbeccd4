#include "dyadic/io.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace dyadic {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

bool looks_numeric(const std::string& s) {
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c)) && c != '.' && c != '-' && c != '+' &&
        c != 'e' && c != 'E')
      return false;
  return !s.empty();
}

}  // namespace

PointCloud cloud_from_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  std::vector<std::pair<int, std::vector<double>>> rows;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto fields = split_csv_line(line);
    if (first && !looks_numeric(fields[0])) {
      first = false;
      continue;  // header
    }
    first = false;
    if (fields.size() < 2) throw std::runtime_error("csv row needs id and coordinates");
    std::vector<double> coords;
    for (std::size_t i = 1; i < fields.size(); ++i) coords.push_back(std::stod(fields[i]));
    rows.emplace_back(std::stoi(fields[0]), std::move(coords));
  }
  std::sort(rows.begin(), rows.end());
  std::vector<std::vector<double>> pts;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].first != static_cast<int>(i))
      throw std::runtime_error("csv ids must be dense 0..n-1");
    pts.push_back(std::move(rows[i].second));
  }
  return PointCloud::from_points(std::move(pts));
}

PointCloud cloud_from_json(const std::string& path) {
  json j = read_json_file(path);
  if (!j.contains("dist")) throw std::runtime_error("json cloud needs a 'dist' key");
  const auto& d = j["dist"];
  if (d.empty()) throw std::runtime_error("empty distance matrix");
  if (d.front().is_array()) {
    int n = static_cast<int>(d.size());
    std::vector<double> flat;
    flat.reserve(static_cast<std::size_t>(n) * n);
    for (const auto& row : d) {
      if (static_cast<int>(row.size()) != n) throw std::runtime_error("distance matrix must be square");
      for (const auto& v : row) flat.push_back(v.get<double>());
    }
    return PointCloud::from_distance_matrix(n, std::move(flat));
  }
  int n = j.at("n").get<int>();
  std::vector<double> flat = d.get<std::vector<double>>();
  return PointCloud::from_distance_matrix(n, std::move(flat));
}

json nets_to_json(const NestedNets& nets) {
  json j;
  j["delta"] = nets.delta;
  j["k_min"] = nets.k_min;
  j["k_max"] = nets.k_max;
  json levels = json::array();
  for (const auto& lvl : nets.levels) levels.push_back(lvl.ids);
  j["levels"] = levels;
  return j;
}

NestedNets nets_from_json(const json& j) {
  NestedNets nets;
  nets.delta = j.at("delta").get<double>();
  nets.k_min = j.at("k_min").get<int>();
  nets.k_max = j.at("k_max").get<int>();
  for (std::size_t l = 0; l < j.at("levels").size(); ++l) {
    SeparatedSet s;
    s.ids = j["levels"][l].get<std::vector<int>>();
    s.separation = nets.scale(nets.k_min + static_cast<int>(l));
    s.maximal = true;
    nets.levels.push_back(std::move(s));
  }
  return nets;
}

json haar_system_to_json(const HaarSystem& haar) {
  json fns = json::array();
  haar.for_each([&](const HaarFunction& h) {
    json f;
    f["level"] = h.cube.level;
    f["index"] = h.cube.index;
    f["theta"] = h.theta;
    f["child_values"] = h.child_values;
    fns.push_back(std::move(f));
  });
  return json{{"functions", fns}};
}

json coefficients_to_json(const HaarCoefficients& coeffs) {
  json entries = json::array();
  for (const auto& [key, x] : coeffs.entries) {
    auto [k, idx, theta] = key;
    entries.push_back(json{{"level", k}, {"index", idx}, {"theta", theta}, {"x", x}});
  }
  return json{{"dim", coeffs.dim}, {"entries", entries}};
}

HaarCoefficients coefficients_from_json(const json& j) {
  HaarCoefficients c;
  c.dim = j.at("dim").get<int>();
  for (const auto& e : j.at("entries"))
    c.entries[{e.at("level").get<int>(), e.at("index").get<int>(), e.at("theta").get<int>()}] =
        e.at("x").get<std::vector<double>>();
  return c;
}

json system_to_json(const DyadicSystem& sys) {
  json j;
  j["delta"] = sys.delta();
  j["k_min"] = sys.k_min();
  j["k_max"] = sys.k_max();
  j["n_points"] = sys.n_points();
  j["canonical_1d"] = sys.canonical_1d();
  json cubes = json::array();
  for (int k = sys.k_min(); k <= sys.k_max(); ++k)
    for (const auto& q : sys.level(k)) {
      json c;
      c["level"] = q.level;
      c["index"] = q.index;
      c["center"] = q.center;
      c["parent"] = q.parent;
      c["members"] = q.members;
      cubes.push_back(std::move(c));
    }
  j["cubes"] = cubes;
  return j;
}

DyadicSystem system_from_json(const json& j, int n_points) {
  DyadicSystem sys(j.at("delta").get<double>(), j.at("k_min").get<int>(), j.at("k_max").get<int>(),
                   n_points);
  for (const auto& c : j.at("cubes")) {
    int k = c.at("level").get<int>();
    int idx = c.at("index").get<int>();
    auto& lvl = sys.mutable_level(k);
    if (static_cast<int>(lvl.size()) <= idx) lvl.resize(static_cast<std::size_t>(idx) + 1);
    Cube& q = lvl[static_cast<std::size_t>(idx)];
    q.level = k;
    q.index = idx;
    q.center = c.at("center").get<int>();
    q.parent = c.at("parent").get<int>();
    q.members = c.at("members").get<std::vector<int>>();
  }
  // rebuild child links from parents
  for (int k = sys.k_min(); k < sys.k_max(); ++k) {
    auto& fine = sys.mutable_level(k + 1);
    auto& coarse = sys.mutable_level(k);
    for (const auto& q : fine)
      coarse[static_cast<std::size_t>(q.parent)].children.push_back(q.index);
  }
  sys.finalize();
  return sys;
}

json family_to_json(const AdjacentFamily& fam) {
  json j;
  j["delta"] = fam.delta;
  j["K"] = fam.K;
  j["capacity_c"] = fam.capacity_c;
  j["mode"] = fam.mode == FamilyMode::canonical1d ? "canonical1d" : "random";
  json systems = json::array();
  for (int omega = 1; omega <= fam.K; ++omega) {
    json s;
    s["omega"] = omega;
    s["param"] = fam.params[static_cast<std::size_t>(omega - 1)];
    s["system"] = system_to_json(fam.system(omega));
    systems.push_back(std::move(s));
  }
  j["systems"] = systems;
  return j;
}

namespace {
json cube_id_json(CubeId id) { return json{{"level", id.level}, {"index", id.index}}; }
}  // namespace

json host_result_to_json(const HostSearchResult& res) {
  json j;
  j["found"] = res.found.has_value();
  if (res.found) {
    j["omega"] = res.found->omega;
    json cubes = json::array();
    for (const auto& e : res.found->entries) {
      json c;
      c["cube"] = cube_id_json(e.cube);
      c["ancestor"] = cube_id_json(e.ancestor);
      cubes.push_back(std::move(c));
    }
    j["cubes"] = cubes;
  }
  json diags = json::array();
  for (const auto& d : res.diagnostics)
    diags.push_back(json{{"omega", d.omega}, {"ball", d.ball}, {"detail", d.detail}});
  j["checks"] = diags;
  return j;
}

json decomposition_to_json(const SparseDecomposition& dec) {
  json j;
  j["T"] = dec.T;
  j["L"] = dec.L;
  j["family_bound"] = dec.family_bound;
  j["family_count"] = dec.families.size();
  j["excluded_mass"] = dec.excluded_mass;
  json fams = json::array();
  for (const auto& f : dec.families) {
    json jf;
    jf["lambda"] = json{{"i", f.label.i}, {"j", f.label.j}, {"omega", f.label.omega}};
    json cubes = json::array();
    for (const auto& ht : f.cubes) {
      json c;
      c["cube"] = cube_id_json(ht.cube);
      c["tau_cube"] = cube_id_json(ht.tau_cube);
      c["P"] = cube_id_json(ht.P);
      c["Ptau"] = cube_id_json(ht.Ptau);
      c["Pstar"] = cube_id_json(ht.Pstar);
      cubes.push_back(std::move(c));
    }
    jf["cubes"] = cubes;
    fams.push_back(std::move(jf));
  }
  j["families"] = fams;
  json exc = json::array();
  for (const auto& e : dec.exclusions)
    exc.push_back(json{{"cube", cube_id_json(e.cube)}, {"reason", e.reason}});
  j["exclusions"] = exc;
  return j;
}

json tau_to_json(const TauMap& tau) {
  json j;
  j["m"] = tau.m;
  j["c_tau"] = tau.c_tau;
  j["max_dilation"] = tau.max_dilation;
  j["k_min"] = tau.k_min;
  j["target"] = tau.target;
  j["notes"] = tau.notes;
  return j;
}

void function_to_csv(const VectorFunction& f, const std::string& path) {
  std::string out = "point_id";
  for (int d = 1; d <= f.dim(); ++d) out += ",e" + std::to_string(d);
  out += "\n";
  for (int p = 0; p < f.n(); ++p) {
    out += std::to_string(p);
    for (double v : f.at(p)) out += "," + format_double(v);
    out += "\n";
  }
  write_text_file(path, out);
}

VectorFunction function_from_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  std::vector<std::vector<double>> rows;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto fields = split_csv_line(line);
    if (first && !looks_numeric(fields[0])) {
      first = false;
      continue;
    }
    first = false;
    std::vector<double> v;
    for (std::size_t i = 1; i < fields.size(); ++i) v.push_back(std::stod(fields[i]));
    rows.push_back(std::move(v));
  }
  if (rows.empty()) throw std::runtime_error("empty function csv");
  int dim = static_cast<int>(rows.front().size());
  VectorFunction f(static_cast<int>(rows.size()), dim);
  for (std::size_t p = 0; p < rows.size(); ++p) {
    auto out = f.at(static_cast<int>(p));
    for (int d = 0; d < dim; ++d) out[static_cast<std::size_t>(d)] = rows[p][static_cast<std::size_t>(d)];
  }
  return f;
}

json stochastic_report(const std::string& op, std::uint64_t inputs_hash, double value,
                       double std_error, double budget, bool pass) {
  json j;
  j["op"] = op;
  j["inputs_hash"] = inputs_hash;
  j["value"] = value;
  j["stderr"] = std_error;
  j["budget"] = budget;
  j["pass"] = pass;
  return j;
}

std::uint64_t fnv1a(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_json_file(const std::string& path, const json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

json read_json_file(const std::string& path) { return json::parse(read_text_file(path)); }

}  // namespace dyadic
