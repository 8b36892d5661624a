// Copyright 2026 The qrep Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "qrep/cli/config.hpp"

namespace qrep::cli {

struct ResultRow {
    double theta_a = 0.0;
    double phi_a = 0.0;
    double theta_b = 0.0;
    double phi_b = 0.0;
    double chi = 0.0;
    double eta = 0.0;
    double retrieval_eta = 0.0;
    double L0 = 0.0;
    double Latt = 0.0;
    std::optional<double> p_succ;
    std::optional<double> bell_fidelity;
    std::optional<double> postselected_fidelity;
    std::optional<double> p2;
    std::optional<double> p1;
    std::optional<double> p0;

    /// Input or metric column by CSV name; throws std::out_of_range for an
    /// unknown name and std::domain_error for a missing metric.
    double column(const std::string &name) const;
};

const std::vector<std::string> &csv_columns();

/// One row per grid point (times samples). Rows come back in point order.
std::vector<ResultRow> run_sweep(const RunConfig &cfg);

/// Evaluates the configured command at a single parameter point.
/// `point_index` seeds the noise draws when cfg.samples > 0.
ResultRow evaluate_point(const RunConfig &point, std::uint64_t point_index);

void write_csv(std::ostream &os, const std::vector<ResultRow> &rows);
std::string format_number(double x);

enum class FitMode { kLogLinear, kPower };

struct FitResult {
    double coefficient = 0.0;  // slope of ln p against x or ln x
    double intercept = 0.0;
    double residual = 0.0;  // max |ln p - fit|
};

/// Least squares of ln p_succ against x (log-linear) or ln x (power).
/// Throws std::invalid_argument for fewer than 3 rows, non-positive p_succ
/// (or x in power mode), or degenerate x values.
FitResult fit_scaling(const std::vector<ResultRow> &rows, const std::string &x_column, FitMode mode);

/// `name=value` summary: a scaling fit when exactly one grid over chi, eta or
/// L0 has at least 3 points (fixed noise only), and time-bin sector weights
/// of the left node for `decompose`.
std::vector<std::string> summary_lines(const RunConfig &cfg, const std::vector<ResultRow> &rows);

}  // namespace qrep::cli
