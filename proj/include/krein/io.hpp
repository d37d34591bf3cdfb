#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "krein/operators.hpp"
#include "krein/verdicts.hpp"

namespace krein::io {

/// Shortest decimal that reads back to the same double ("nan", "inf", "-inf"
/// for non-finite values).
std::string format_double(double v);

/// Writes to a temporary file in the same directory, then renames it over path.
void write_atomic(const std::filesystem::path& path, std::string_view content);

/// Two columns x,U with a header row.
std::string profile_csv(const WaveProfile& U);
nlohmann::json profile_metadata(const WaveProfile& U, double tol);

nlohmann::json result_json(const KreinIndexResult& r);

/// re,im,class,krein_form_value; requires a result computed with keep_spectrum.
std::string spectrum_csv(const KreinIndexResult& r);
nlohmann::json spectrum_json(const KreinIndexResult& r);

/// s,p,c,model,n_L,slope,K_formula,k_r,k_c,k_i_minus,verdict,status.
std::string sweep_csv(const SweepResult& sw, double s, double p, double c, SweepAxis axis,
                      WaveModel model);
nlohmann::json sweep_json(const SweepResult& sw);
/// One "flip in (a, b)" line per flip, or "no flip".
std::string flip_summary(const SweepResult& sw);

/// Row-major little-endian float64 entries.
std::string operator_bytes(const DenseMatrix& A);
nlohmann::json operator_header(const DenseMatrix& A);

}  // namespace krein::io
