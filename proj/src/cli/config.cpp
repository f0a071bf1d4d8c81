#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "scatter1d/cli.hpp"

namespace scatter1d::cli {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw Error(ErrorCode::Validation, field + ": " + what);
}

const json& require(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) fail(where + "." + key, "missing");
  return obj.at(key);
}

double number(const json& j, const std::string& field) {
  if (!j.is_number()) fail(field, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(field, "must be finite");
  return v;
}

double number_or(const json& obj, const std::string& key, double fallback, const std::string& where) {
  return obj.contains(key) ? number(obj.at(key), where + "." + key) : fallback;
}

int integer(const json& j, const std::string& field) {
  if (!j.is_number_integer()) fail(field, "expected an integer");
  return j.get<int>();
}

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size() && std::isfinite(out);
}

std::vector<Complex> complex_list(const json& j, const std::string& field) {
  if (!j.is_array()) fail(field, "expected an array");
  std::vector<Complex> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(parse_complex(j[i], field + "[" + std::to_string(i) + "]"));
  }
  return out;
}

std::vector<double> real_list(const json& j, const std::string& field) {
  if (!j.is_array()) fail(field, "expected an array");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(number(j[i], field + "[" + std::to_string(i) + "]"));
  }
  return out;
}

void strictly_increasing(const std::vector<double>& v, const std::string& field) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i - 1] < v[i])) fail(field, "must be strictly increasing");
  }
}

PotentialFn profile_function(const json& p, const std::string& where) {
  const std::string kind = require(p, "kind", where).get<std::string>();
  const Complex amp = p.contains("amplitude") ? parse_complex(p.at("amplitude"), where + ".amplitude")
                                              : Complex{1.0};
  const double center = number_or(p, "center", 0.0, where);
  if (kind == "gaussian") {
    const double w = number_or(p, "width", 1.0, where);
    if (!(w > 0.0)) fail(where + ".width", "must be > 0");
    return [=](double x) { return amp * std::exp(-((x - center) / w) * ((x - center) / w)); };
  }
  if (kind == "sech2") {
    const double alpha = number_or(p, "alpha", 1.0, where);
    if (!(alpha > 0.0)) fail(where + ".alpha", "must be > 0");
    return [=](double x) {
      const double c = std::cosh(alpha * (x - center));
      return amp / (c * c);
    };
  }
  if (kind == "tabulated") {
    const auto xs = real_list(require(p, "x", where), where + ".x");
    const auto vs = complex_list(require(p, "v", where), where + ".v");
    if (xs.size() != vs.size() || xs.size() < 2) fail(where, "x and v need equal length >= 2");
    strictly_increasing(xs, where + ".x");
    return [xs, vs](double x) {
      if (x < xs.front() || x > xs.back()) return Complex{0.0};
      std::size_t i = 1;
      while (i + 1 < xs.size() && xs[i] < x) ++i;
      const double f = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
      return vs[i - 1] + f * (vs[i] - vs[i - 1]);
    };
  }
  fail(where + ".kind", "unknown profile kind '" + kind + "'");
}

PotentialModel parse_model(const json& m) {
  const std::string where = "model";
  if (!m.is_object()) fail(where, "expected an object");
  const json& type_field = require(m, "type", where);
  if (!type_field.is_string()) fail("model.type", "expected a string");
  const std::string tag = type_field.get<std::string>();

  if (tag == "Delta") return Delta{parse_complex(require(m, "z", where), "model.z")};
  if (tag == "MultiDelta") {
    MultiDelta md;
    md.eps = number_or(m, "eps", 1.0, where);
    md.couplings = complex_list(require(m, "couplings", where), "model.couplings");
    md.centers = real_list(require(m, "centers", where), "model.centers");
    if (md.couplings.size() != md.centers.size()) fail("model.couplings", "length differs from centers");
    strictly_increasing(md.centers, "model.centers");
    return md;
  }
  if (tag == "Barrier") {
    Barrier b;
    b.z = parse_complex(require(m, "z", where), "model.z");
    b.x0 = number_or(m, "x0", 0.0, where);
    b.width = number(require(m, "width", where), "model.width");
    if (!(b.width > 0.0)) fail("model.width", "must be > 0");
    return b;
  }
  if (tag == "PointInteractions") {
    PointInteractions pi;
    const json& sites = require(m, "sites", where);
    if (!sites.is_array()) fail("model.sites", "expected an array");
    std::vector<double> centers;
    for (std::size_t i = 0; i < sites.size(); ++i) {
      const std::string w = "model.sites[" + std::to_string(i) + "]";
      const double c = number(require(sites[i], "center", w), w + ".center");
      const json& b = require(sites[i], "B", w);
      if (!b.is_array() || b.size() != 2 || !b[0].is_array() || b[0].size() != 2 ||
          !b[1].is_array() || b[1].size() != 2) {
        fail(w + ".B", "expected [[a11, a12], [a21, a22]]");
      }
      Matrix2 mat{parse_complex(b[0][0], w + ".B[0][0]"), parse_complex(b[0][1], w + ".B[0][1]"),
                  parse_complex(b[1][0], w + ".B[1][0]"), parse_complex(b[1][1], w + ".B[1][1]")};
      if (mat.det() == 0.0) fail(w + ".B", "matching matrix is singular");
      centers.push_back(c);
      pi.sites.push_back(PointInteraction::constant(c, mat));
    }
    strictly_increasing(centers, "model.sites.center");
    return pi;
  }
  if (tag == "LocallyPeriodic") {
    LocallyPeriodic lp;
    lp.width = number(require(m, "width", where), "model.width");
    if (!(lp.width > 0.0)) fail("model.width", "must be > 0");
    if (m.contains("slices_per_period")) {
      lp.slices_per_period = integer(m.at("slices_per_period"), "model.slices_per_period");
      if (lp.slices_per_period < 1) fail("model.slices_per_period", "must be >= 1");
    }
    const json& cs = require(m, "coefficients", where);
    if (!cs.is_array()) fail("model.coefficients", "expected an array of {n, z}");
    for (std::size_t i = 0; i < cs.size(); ++i) {
      const std::string w = "model.coefficients[" + std::to_string(i) + "]";
      const int n = integer(require(cs[i], "n", w), w + ".n");
      lp.coefficients[n] += parse_complex(require(cs[i], "z", w), w + ".z");
    }
    return lp;
  }
  if (tag == "Sampled") {
    const json& p = require(m, "profile", where);
    const double a = number(require(m, "a", where), "model.a");
    const double b = number(require(m, "b", where), "model.b");
    if (!(a < b)) fail("model.b", "support must satisfy a < b");
    if (p.is_object() && p.value("kind", "") == "piecewise") {
      Sampled s{a, b, complex_list(require(p, "heights", "model.profile"), "model.profile.heights")};
      if (s.heights.empty()) fail("model.profile.heights", "must not be empty");
      return s;
    }
    const int n = integer(require(m, "slices", where), "model.slices");
    if (n < 1) fail("model.slices", "must be >= 1");
    return sample_potential(profile_function(p, "model.profile"), a, b, n);
  }
  fail("model.type", "unknown model tag '" + tag + "'");
}

GridSpec parse_grid(const json& g) {
  GridSpec s;
  s.min = number(require(g, "min", "grid"), "grid.min");
  s.max = number(require(g, "max", "grid"), "grid.max");
  s.count = integer(require(g, "count", "grid"), "grid.count");
  const std::string spacing = g.value("spacing", std::string("log"));
  if (spacing != "log" && spacing != "lin" && spacing != "linear") {
    fail("grid.spacing", "expected 'log' or 'lin'");
  }
  s.log = spacing == "log";
  if (!(s.min > 0.0)) fail("grid.min", "must be > 0");
  if (!(s.max >= s.min)) fail("grid.max", "must be >= grid.min");
  if (s.count < 1) fail("grid.count", "must be >= 1");
  return s;
}

}  // namespace

std::vector<double> GridSpec::points() const {
  return log ? log_grid(min, max, count) : linear_grid(min, max, count);
}

GridSpec parse_grid_flag(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string part; std::getline(ss, part, ',');) parts.push_back(part);
  if (parts.size() != 4) fail("--grid", "expected min,max,count,log|lin");
  json g;
  double lo = 0.0, hi = 0.0, count = 0.0;
  if (!parse_double(parts[0], lo) || !parse_double(parts[1], hi) || !parse_double(parts[2], count) ||
      count != std::floor(count)) {
    fail("--grid", "expected min,max,count,log|lin");
  }
  g["min"] = lo;
  g["max"] = hi;
  g["count"] = static_cast<int>(count);
  g["spacing"] = parts[3];
  try {
    return parse_grid(g);
  } catch (const Error& e) {
    fail("--grid", e.what());
  }
}

Complex parse_complex_string(const std::string& raw, const std::string& field) {
  std::string s;
  for (char c : raw) {
    if (c != ' ') s += c;
  }
  double re = 0.0, im = 0.0;
  if (s.empty()) fail(field, "empty complex literal");
  if (s.back() != 'i' && s.back() != 'j') {
    if (!parse_double(s, re)) fail(field, "malformed complex literal '" + raw + "'");
    return {re, 0.0};
  }
  s.pop_back();
  // Split at the last sign that is not an exponent sign.
  std::size_t split = std::string::npos;
  for (std::size_t i = s.size(); i-- > 1;) {
    if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  std::string real_part = split == std::string::npos ? "" : s.substr(0, split);
  std::string imag_part = split == std::string::npos ? s : s.substr(split);
  if (imag_part.empty() || imag_part == "+") imag_part = "1";
  if (imag_part == "-") imag_part = "-1";
  if ((!real_part.empty() && !parse_double(real_part, re)) || !parse_double(imag_part, im)) {
    fail(field, "malformed complex literal '" + raw + "'");
  }
  return {re, im};
}

Complex parse_complex(const json& j, const std::string& field) {
  if (j.is_number()) return {number(j, field), 0.0};
  if (j.is_string()) return parse_complex_string(j.get<std::string>(), field);
  if (j.is_array() && j.size() == 2) return {number(j[0], field + "[0]"), number(j[1], field + "[1]")};
  fail(field, "expected a number, [re, im] or a string like \"1-2i\"");
}

namespace {

JobConfig parse_config_fields(const json& j) {
  if (!j.is_object()) fail("config", "expected a JSON object");
  const json& schema = require(j, "schema", "config");
  if (!schema.is_number_integer() || schema.get<int>() != 1) fail("schema", "unsupported version (expected 1)");

  JobConfig c;
  if (j.contains("model")) {
    c.model = parse_model(j.at("model"));
    c.model_tag = model_name(*c.model);
    try {
      validate(*c.model);
    } catch (const Error& e) {
      fail("model", e.what());
    }
  }
  if (j.contains("grid")) c.grid = parse_grid(j.at("grid"));
  if (j.contains("region")) {
    const json& r = j.at("region");
    Region reg;
    reg.re_min = number(require(r, "re_min", "region"), "region.re_min");
    reg.re_max = number(require(r, "re_max", "region"), "region.re_max");
    reg.im_min = number(require(r, "im_min", "region"), "region.im_min");
    reg.im_max = number(require(r, "im_max", "region"), "region.im_max");
    if (!(reg.re_min <= reg.re_max)) fail("region.re_max", "must be >= re_min");
    if (!(reg.im_min <= reg.im_max)) fail("region.im_max", "must be >= im_min");
    c.region = reg;
    if (r.contains("nx")) c.region_nx = integer(r.at("nx"), "region.nx");
    if (r.contains("ny")) c.region_ny = integer(r.at("ny"), "region.ny");
    if (c.region_nx < 2 || c.region_ny < 2) fail("region.nx", "grid sizes must be >= 2");
  }
  if (j.contains("tolerances")) {
    const json& t = j.at("tolerances");
    c.tol.check = number_or(t, "check", c.tol.check, "tolerances");
    c.tol.symmetry = number_or(t, "symmetry", c.tol.symmetry, "tolerances");
    c.tol.root = number_or(t, "root", c.tol.root, "tolerances");
    c.tol.separation = number_or(t, "separation", c.tol.separation, "tolerances");
    c.tol.invisibility = number_or(t, "invisibility", c.tol.invisibility, "tolerances");
  }
  if (j.contains("output")) {
    const json& o = j.at("output");
    if (o.contains("path")) c.out_path = o.at("path").get<std::string>();
    if (o.contains("format")) {
      const std::string f = o.at("format").get<std::string>();
      if (f == "csv") {
        c.format = Format::Csv;
      } else if (f == "json") {
        c.format = Format::Json;
      } else {
        fail("output.format", "expected 'csv' or 'json'");
      }
    }
  }
  if (j.contains("laser")) {
    const json& l = j.at("laser");
    LaserQuery q;
    q.width = number(require(l, "width", "laser"), "laser.width");
    q.m = integer(require(l, "m", "laser"), "laser.m");
    if (l.contains("eta0") == l.contains("k0")) fail("laser", "give exactly one of eta0 or k0");
    if (l.contains("eta0")) {
      q.solve_for = LaserQuery::SolveFor::KappaAndK;
      q.eta0 = number(l.at("eta0"), "laser.eta0");
    } else {
      q.solve_for = LaserQuery::SolveFor::EtaAndKappa;
      q.k0 = number(l.at("k0"), "laser.k0");
    }
    q.damping = number_or(l, "damping", q.damping, "laser");
    if (!(q.width > 0.0)) fail("laser.width", "must be > 0");
    if (q.m < 1) fail("laser.m", "must be >= 1");
    c.laser = q;
  }
  if (j.contains("profile")) {
    const json& p = j.at("profile");
    c.profile_k = number(require(p, "k", "profile"), "profile.k");
    if (!(c.profile_k > 0.0)) fail("profile.k", "must be > 0");
    if (p.contains("left")) {
      const auto left = complex_list(p.at("left"), "profile.left");
      if (left.size() != 2) fail("profile.left", "expected [A, B]");
      c.profile_left = {left[0], left[1]};
    }
  }
  if (j.contains("invisibility")) {
    const json& v = j.at("invisibility");
    if (v.contains("k_min")) c.invisibility_min = number(v.at("k_min"), "invisibility.k_min");
    if (v.contains("k_max")) c.invisibility_max = number(v.at("k_max"), "invisibility.k_max");
    if (v.contains("samples")) c.invisibility_samples = integer(v.at("samples"), "invisibility.samples");
  }
  if (j.contains("symmetry")) {
    const json& s = j.at("symmetry");
    if (s.contains("about")) c.symmetry_about = number(s.at("about"), "symmetry.about");
  }
  if (j.contains("fault_injection")) {
    c.fault_m11_scale = parse_complex(require(j.at("fault_injection"), "m11_scale", "fault_injection"),
                                      "fault_injection.m11_scale");
  }
  return c;
}

}  // namespace

JobConfig parse_config(const json& j) {
  try {
    return parse_config_fields(j);
  } catch (const json::exception& e) {
    fail("config", e.what());
  }
}

JobConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("--config", "cannot open '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    fail("--config", std::string("invalid JSON: ") + e.what());
  }
  return parse_config(j);
}

}  // namespace scatter1d::cli
