#pragma once

#include <array>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "satqkd/sweep.hpp"

namespace satqkd::csv {

inline constexpr std::string_view header =
    "h_m,theta_rad,delta,delta_sch,delta_rot,delta_h,theta_overlap,T_total,loss_db,r,s,t,"
    "lambda1,lambda2,lambda3,I_ab_bits,S_aE_bits,K_bits,mu";

inline constexpr std::size_t column_count = 19;

enum Column : std::size_t {
  h_m, theta_rad, delta, delta_sch, delta_rot, delta_h, theta_overlap, T_total, loss_db,
  r, s, t, lambda1, lambda2, lambda3, I_ab_bits, S_aE_bits, K_bits, mu
};

// One output line; empty cells are columns that do not apply.
using Row = std::array<std::optional<double>, column_count>;

// Shortest decimal string that parses back to exactly `v`.
std::string format_double(double v);

std::string format_row(const Row& row);

// Fills every column a sweep row provides (all of them on success).
Row from_sweep_row(const keyrate::SweepRow& row);

// `# key = value` lines.
void write_comments(std::ostream& os, const std::vector<std::pair<std::string, std::string>>& entries);

// Parses one data line back into cells (used by round-trip tests and tools).
Row parse_row(std::string_view line);

}  // namespace satqkd::csv
