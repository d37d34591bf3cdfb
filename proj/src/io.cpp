#include "krein/io.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <system_error>
#include <unistd.h>

namespace krein::io {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_atomic(const std::filesystem::path& path, std::string_view content) {
  namespace fs = std::filesystem;
  const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
  fs::create_directories(dir);
  const fs::path tmp = dir / ("." + path.filename().string() + ".tmp" + std::to_string(::getpid()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw std::runtime_error("rename to " + path.string() + " failed: " + ec.message());
  }
}

namespace {

using nlohmann::json;

// Non-finite doubles become strings so the JSON stays valid.
json num(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '\n') ch = ' ';
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + "\"";
}

}  // namespace

std::string profile_csv(const WaveProfile& U) {
  std::string out = "x,U\n";
  const auto& g = *U.grid();
  for (int j = 0; j < g.n(); ++j)
    out += format_double(g.point(j)) + "," + format_double(U.values()[j]) + "\n";
  return out;
}

json profile_metadata(const WaveProfile& U, double tol) {
  json w = json::array();
  for (const auto& s : U.warnings) w.push_back(s);
  return {{"s", num(U.s)},
          {"p", num(U.p)},
          {"c", num(U.c)},
          {"model", to_string(U.model)},
          {"residual_norm", num(U.residual_norm)},
          {"tol", num(tol)},
          {"boundary_value", num(U.boundary_value)},
          {"peak", num(U.peak())},
          {"iterations", U.iterations},
          {"stabilizing_factor", num(U.stabilizing_factor)},
          {"truncation_warning", U.truncation_warning},
          {"grid", {{"n", U.grid()->n()}, {"half_length", num(U.grid()->half_length())},
                    {"spacing", num(U.grid()->spacing())}}},
          {"warnings", w}};
}

json result_json(const KreinIndexResult& r) {
  json j = {{"s", num(r.s)},
            {"p", num(r.p)},
            {"c", num(r.c)},
            {"model", to_string(r.model)},
            {"grid", {{"n", r.n}, {"half_length", num(r.half_length)}}},
            {"n_L", r.n_L},
            {"d", num(r.d)},
            {"d_restricted", num(r.d_restricted)},
            {"n_L_restricted", r.n_L_restricted},
            {"slope", num(r.slope)},
            {"slope_reference", num(r.slope_reference)},
            {"slope_tol", num(r.slope_tol)},
            {"K_formula", r.K_formula},
            {"k_r", r.k_r},
            {"k_c", r.k_c},
            {"k_i_minus", r.k_i_minus},
            {"K_direct", r.K_direct},
            {"K_torus", r.K_torus},
            {"verdict", to_string(r.verdict)},
            {"theory_violation", r.theory_violation},
            {"accuracy_warning", r.accuracy_warning},
            {"indeterminate", r.indeterminate},
            {"zero_spread", num(r.zero_spread)},
            {"quadruple_defect", num(r.quadruple_defect)},
            {"generalized_kernel",
             {{"dim", r.gker.dim},
              {"kernel_dim", r.gker.kernel_dim},
              {"chain_value", num(r.gker.chain_value)},
              {"chain_tol", num(r.gker.chain_tol)}}},
            {"wave_residual", num(r.wave_residual)},
            {"boundary_ratio", num(r.boundary_ratio)},
            {"translation_restored", r.translation_restored},
            {"restored_eigenvalue", num(r.restored_eigenvalue)},
            {"diagnostics", r.diagnostics}};
  if (r.bbm)
    j["bbm"] = {{"finite_difference", num(r.bbm->finite_difference)},
                {"closed_form", num(r.bbm->closed_form)},
                {"printed_bracket", num(r.bbm->printed_bracket)},
                {"step_flag", r.bbm->step_flag}};
  return j;
}

std::string spectrum_csv(const KreinIndexResult& r) {
  std::string out = "re,im,class,krein_form_value\n";
  for (size_t i = 0; i < r.eigenvalues.size(); ++i)
    out += format_double(r.eigenvalues[i].real()) + "," + format_double(r.eigenvalues[i].imag()) +
           "," + to_string(r.classes[i]) + "," + format_double(r.form_values[i]) + "\n";
  return out;
}

json spectrum_json(const KreinIndexResult& r) {
  json rows = json::array();
  for (size_t i = 0; i < r.eigenvalues.size(); ++i)
    rows.push_back({{"re", num(r.eigenvalues[i].real())},
                    {"im", num(r.eigenvalues[i].imag())},
                    {"class", to_string(r.classes[i])},
                    {"krein_form_value", num(r.form_values[i])}});
  return {{"eigenvalues", rows}};
}

std::string sweep_csv(const SweepResult& sw, double s, double p, double c, SweepAxis axis,
                      WaveModel model) {
  std::string out = "s,p,c,model,n_L,slope,K_formula,k_r,k_c,k_i_minus,verdict,status\n";
  for (const auto& pt : sw.points) {
    double ss = s, pp = p, cc = c;
    (axis == SweepAxis::P ? pp : axis == SweepAxis::C ? cc : ss) = pt.value;
    out += format_double(ss) + "," + format_double(pp) + "," + format_double(cc) + "," +
           to_string(model) + ",";
    if (pt.result) {
      const auto& r = *pt.result;
      out += std::to_string(r.n_L) + "," + format_double(r.slope) + "," +
             std::to_string(r.K_formula) + "," + std::to_string(r.k_r) + "," +
             std::to_string(r.k_c) + "," + std::to_string(r.k_i_minus) + "," +
             to_string(r.verdict) + ",";
    } else {
      out += ",,,,,,,";
    }
    out += csv_field(pt.status) + "\n";
  }
  return out;
}

json sweep_json(const SweepResult& sw) {
  json pts = json::array();
  for (const auto& pt : sw.points) {
    json j = {{"value", num(pt.value)}, {"status", pt.status}};
    if (pt.result) j["result"] = result_json(*pt.result);
    pts.push_back(j);
  }
  json flips = json::array();
  for (const auto& [a, b] : sw.flips) flips.push_back({num(a), num(b)});
  return {{"points", pts}, {"flips", flips}};
}

std::string flip_summary(const SweepResult& sw) {
  if (sw.flips.empty()) return "no flip\n";
  std::string out;
  for (const auto& [a, b] : sw.flips)
    out += "flip in (" + format_double(a) + ", " + format_double(b) + ")\n";
  return out;
}

std::string operator_bytes(const DenseMatrix& A) {
  const Eigen::Index n = A.entries.rows();
  std::string out(static_cast<size_t>(n * n) * 8, '\0');
  size_t pos = 0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      std::uint64_t bits = std::bit_cast<std::uint64_t>(A.entries(i, j));
      if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
      std::memcpy(out.data() + pos, &bits, 8);
      pos += 8;
    }
  return out;
}

json operator_header(const DenseMatrix& A) {
  json j = {{"order", A.order()},
            {"label", A.label},
            {"dtype", "float64"},
            {"endianness", "little"},
            {"layout", "row-major"},
            {"basis", "real Fourier: const, cos_1..cos_m, nyquist, sin_1..sin_m"}};
  if (A.grid) j["grid"] = {{"n", A.grid->n()}, {"half_length", num(A.grid->half_length())}};
  return j;
}

}  // namespace krein::io
