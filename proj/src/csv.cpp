#include "satqkd/csv.hpp"

#include <charconv>
#include <stdexcept>
#include <system_error>

namespace satqkd::csv {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  if (res.ec != std::errc{}) throw std::runtime_error("double formatting failed");
  return std::string(buf, res.ptr);
}

std::string format_row(const Row& row) {
  std::string out;
  for (std::size_t i = 0; i < column_count; ++i) {
    if (i) out += ',';
    if (row[i]) out += format_double(*row[i]);
  }
  return out;
}

Row from_sweep_row(const keyrate::SweepRow& row) {
  Row out{};
  out[h_m] = row.height;
  out[theta_rad] = row.zenith_angle;
  if (row.shift) {
    out[delta] = row.shift->delta_total;
    out[delta_sch] = row.shift->delta_schwarzschild;
    out[delta_rot] = row.shift->delta_rotation;
    out[delta_h] = row.shift->delta_higher;
  }
  if (!row.ok()) return out;
  out[theta_overlap] = row.overlap;
  out[T_total] = row.transmissivity;
  out[loss_db] = row.loss_db;
  const auto& k = row.result;
  out[r] = k.r;
  out[s] = k.s;
  out[t] = k.t;
  out[lambda1] = k.lambda1;
  out[lambda2] = k.lambda2;
  out[lambda3] = k.lambda3;
  out[I_ab_bits] = k.mutual_information;
  out[S_aE_bits] = k.holevo;
  out[K_bits] = k.key_rate;
  out[mu] = row.mu;
  return out;
}

void write_comments(std::ostream& os,
                    const std::vector<std::pair<std::string, std::string>>& entries) {
  for (const auto& [key, value] : entries) os << "# " << key << " = " << value << '\n';
}

Row parse_row(std::string_view line) {
  Row out{};
  std::size_t col = 0;
  std::size_t pos = 0;
  while (true) {
    const std::size_t comma = line.find(',', pos);
    const std::string_view cell =
        line.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
    if (col >= column_count) throw std::invalid_argument("too many CSV columns");
    if (!cell.empty()) {
      double v = 0.0;
      const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (res.ec != std::errc{} || res.ptr != cell.data() + cell.size()) {
        throw std::invalid_argument("bad CSV number: " + std::string(cell));
      }
      out[col] = v;
    }
    ++col;
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  if (col != column_count) throw std::invalid_argument("wrong CSV column count");
  return out;
}

}  // namespace satqkd::csv
