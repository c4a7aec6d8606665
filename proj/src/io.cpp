#include "ppart/io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "ppart/error.hpp"

namespace ppart {

using nlohmann::json;

namespace {

[[noreturn]] void field_error(const std::string& path, const std::string& what) {
  throw ParseError("field " + path + ": " + what);
}

const json& require(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) field_error(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) field_error(path + "." + key, "missing");
  return *it;
}

double number(const json& v, const std::string& path) {
  if (!v.is_number()) field_error(path, "expected a number");
  return v.get<double>();
}

std::size_t count_field(const json& v, const std::string& path) {
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0) field_error(path, "expected a non-negative integer");
  return v.get<std::size_t>();
}

Point vector_field(const json& v, std::size_t n, const std::string& path) {
  if (!v.is_array()) field_error(path, "expected an array of " + std::to_string(n) + " numbers");
  if (v.size() != n) field_error(path, "expected " + std::to_string(n) + " entries, got " + std::to_string(v.size()));
  Point out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(number(v[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

std::vector<Point> frame_field(const json& v, std::size_t n, const std::string& path) {
  if (!v.is_array()) field_error(path, "expected an array of vectors");
  std::vector<Point> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(vector_field(v[i], n, path + "[" + std::to_string(i) + "]"));
  return out;
}

Polynomial poly_field(const json& v, std::size_t n, const std::string& path) {
  const json& coeffs = require(v, "coeffs", path);
  const json& exps = require(v, "exponents", path);
  if (!coeffs.is_array() || !exps.is_array()) field_error(path, "coeffs and exponents must be arrays");
  if (coeffs.size() != exps.size()) field_error(path, "coeffs and exponents differ in length");
  std::vector<std::pair<std::vector<unsigned>, double>> terms;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    const std::string ep = path + ".exponents[" + std::to_string(i) + "]";
    if (!exps[i].is_array() || exps[i].size() != n) field_error(ep, "expected " + std::to_string(n) + " exponents");
    std::vector<unsigned> e;
    for (const auto& x : exps[i]) e.push_back(static_cast<unsigned>(count_field(x, ep)));
    terms.emplace_back(std::move(e), number(coeffs[i], path + ".coeffs[" + std::to_string(i) + "]"));
  }
  return Polynomial::from_terms(n, terms);
}

VarietySpec variety_field(const json& v, std::size_t n, const std::string& path) {
  const json& kind_json = require(v, "kind", path);
  if (!kind_json.is_string()) field_error(path + ".kind", "expected a string");
  const std::string kind = kind_json.get<std::string>();
  try {
    if (kind == "line")
      return make_line(vector_field(require(v, "point", path), n, path + ".point"),
                       vector_field(require(v, "dir", path), n, path + ".dir"));
    if (kind == "circle") {
      const Point center = vector_field(require(v, "center", path), n, path + ".center");
      const double radius = number(require(v, "radius", path), path + ".radius");
      std::optional<std::array<Point, 2>> frame;
      if (v.contains("frame")) {
        auto f = frame_field(v["frame"], n, path + ".frame");
        if (f.size() != 2) field_error(path + ".frame", "a circle frame has exactly 2 vectors");
        frame = std::array<Point, 2>{f[0], f[1]};
      }
      return make_circle(center, radius, frame);
    }
    if (kind == "kplane")
      return make_flat(vector_field(require(v, "point", path), n, path + ".point"),
                       frame_field(require(v, "frame", path), n, path + ".frame"));
    if (kind == "implicit") {
      const std::size_t k = count_field(require(v, "k", path), path + ".k");
      const json& polys = require(v, "polys", path);
      if (!polys.is_array()) field_error(path + ".polys", "expected an array");
      std::vector<Polynomial> defining;
      for (std::size_t i = 0; i < polys.size(); ++i)
        defining.push_back(poly_field(polys[i], n, path + ".polys[" + std::to_string(i) + "]"));
      return make_implicit(n, k, std::move(defining));
    }
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    field_error(path, e.what());
  }
  field_error(path + ".kind", "unsupported variety kind \"" + kind + "\" (supported: line, circle, kplane, implicit)");
}

std::string location(std::string_view text, std::size_t byte) {
  std::size_t line = 1, column = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

std::string bits_string(std::uint32_t bits, std::size_t s) {
  std::string out;
  for (std::size_t j = 0; j < s; ++j) out.push_back(((bits >> j) & 1U) ? '1' : '0');
  return out;
}

const char* method_name(CountMethod m) { return m == CountMethod::exact_lines ? "exact_lines" : "sampled"; }

}  // namespace

Instance parse_instance(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("malformed JSON at " + location(text, e.byte) + ": " + e.what());
  }
  Instance inst;
  inst.n = count_field(require(doc, "n", "instance"), "n");
  if (inst.n == 0) field_error("n", "must be positive");
  if (doc.contains("varieties")) {
    const json& vs = doc["varieties"];
    if (!vs.is_array()) field_error("varieties", "expected an array");
    for (std::size_t i = 0; i < vs.size(); ++i) {
      const std::string path = "varieties[" + std::to_string(i) + "]";
      inst.varieties.push_back(variety_field(vs[i], inst.n, path));
      inst.labels.push_back(vs[i].contains("label") && vs[i]["label"].is_string() ? vs[i]["label"].get<std::string>()
                                                                                  : std::string{});
    }
  }
  if (doc.contains("points")) {
    const json& ps = doc["points"];
    if (!ps.is_array()) field_error("points", "expected an array");
    for (std::size_t i = 0; i < ps.size(); ++i)
      inst.points.push_back(vector_field(ps[i], inst.n, "points[" + std::to_string(i) + "]"));
  }
  return inst;
}

Instance load_instance(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_instance(buf.str());
}

std::string counts_csv(const CellCounts& counts) {
  std::ostringstream out;
  out << "w,count\n";
  for (std::uint32_t w = 0; w < counts.size(); ++w) out << bits_string(w, counts.s()) << ',' << counts[SignVector{w}] << '\n';
  return out.str();
}

std::string trace_csv(const PartitionReport& report) {
  std::ostringstream out;
  out << std::setprecision(17);
  if (!report.bisection.empty()) {
    out << "step,parts,max_imbalance,max_slack,max_relative_slack\n";
    for (const auto& b : report.bisection)
      out << b.step << ',' << b.parts << ',' << b.max_imbalance << ',' << b.max_slack << ',' << b.max_relative_slack
          << '\n';
    return out.str();
  }
  out << "restart,stage,delta,step,objective,accepted\n";
  for (const auto& t : report.trace)
    out << t.restart << ',' << t.stage << ',' << t.delta << ',' << t.step << ',' << t.objective << ','
        << (t.accepted ? 1 : 0) << '\n';
  return out.str();
}

std::string report_json(const PartitionReport& report, const SamplingConfig& sampling, std::uint64_t seed) {
  json doc;
  doc["n"] = report.n;
  doc["s"] = report.s;
  doc["k"] = report.k;
  doc["seed"] = seed;
  doc["objects"] = report.num_objects;
  doc["degrees"] = report.degrees;
  doc["D"] = report.total_degree;
  doc["max_count"] = report.max_count;
  doc["bound_ratio"] = report.bound_ratio;
  doc["objective"] = report.objective;
  doc["best_restart"] = report.best_restart;
  doc["counts"] = std::vector<std::int64_t>(report.counts.values().begin(), report.counts.values().end());
  doc["spectrum"] = report.spectrum.values;
  doc["sampling"] = {{"method", method_name(sampling.method)},
                     {"radius", sampling.radius},
                     {"count", sampling.count},
                     {"tau", sampling.tau},
                     {"seed", sampling.seed}};
  json blocks = json::array();
  for (const auto& b : report.x.blocks()) blocks.push_back(b);
  doc["x"] = blocks;
  json polys = json::array();
  for (const auto& p : report.pvec) {
    json exps = json::array();
    for (std::size_t i = 0; i < p.basis().size(); ++i) {
      auto e = p.basis().exponents(i);
      exps.push_back(std::vector<unsigned>(e.begin(), e.end()));
    }
    polys.push_back({{"degree", p.basis().degree()},
                     {"coeffs", std::vector<double>(p.coeffs().begin(), p.coeffs().end())},
                     {"exponents", exps}});
  }
  doc["pvec"] = polys;
  return doc.dump(2) + "\n";
}

void write_report(const PartitionReport& report, const SamplingConfig& sampling, std::uint64_t seed,
                  const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto write = [&](const char* name, const std::string& text) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw Error("cannot write " + (dir / name).string());
    out << text;
  };
  write("counts.csv", counts_csv(report.counts));
  write("report.json", report_json(report, sampling, seed));
  write("trace.csv", trace_csv(report));
}

SerializedReport parse_report(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("malformed report at " + location(text, e.byte) + ": " + e.what());
  }
  SerializedReport out;
  const std::size_t n = count_field(require(doc, "n", "report"), "n");
  const std::size_t s = count_field(require(doc, "s", "report"), "s");
  const json& polys = require(doc, "pvec", "report");
  for (std::size_t i = 0; i < polys.size(); ++i) {
    const std::string path = "pvec[" + std::to_string(i) + "]";
    auto basis = make_basis(n, count_field(require(polys[i], "degree", path), path + ".degree"));
    const json& coeffs = require(polys[i], "coeffs", path);
    if (coeffs.size() != basis->size()) field_error(path + ".coeffs", "length does not match the basis");
    out.pvec.emplace_back(basis, coeffs.get<std::vector<double>>());
  }
  out.counts = CellCounts(s, require(doc, "counts", "report").get<std::vector<std::int64_t>>());
  const json& sm = require(doc, "sampling", "report");
  out.sampling.method = require(sm, "method", "sampling").get<std::string>() == "exact_lines"
                            ? CountMethod::exact_lines
                            : CountMethod::sampled;
  out.sampling.radius = number(require(sm, "radius", "sampling"), "sampling.radius");
  out.sampling.count = count_field(require(sm, "count", "sampling"), "sampling.count");
  out.sampling.tau = number(require(sm, "tau", "sampling"), "sampling.tau");
  out.sampling.seed = require(sm, "seed", "sampling").get<std::uint64_t>();
  return out;
}

}  // namespace ppart
