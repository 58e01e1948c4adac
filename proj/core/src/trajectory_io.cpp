#include "mormor/trajectory_io.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "mormor/errors.hpp"

namespace mormor {

namespace {

constexpr std::array<char, 8> kMagic = {'M', 'O', 'R', 'T', 'R', 'A', 'J', '1'};

static_assert(std::endian::native == std::endian::little,
              "binary trajectory container assumes a little-endian host");

template <typename T>
void write_raw(std::ostream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read_raw(std::istream& in) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw ContractViolation("read_trajectory_binary: truncated input");
  return value;
}

std::vector<double> parse_csv_row(const std::string& line) {
  std::vector<double> values;
  std::stringstream row(line);
  std::string cell;
  while (std::getline(row, cell, ',')) {
    try {
      values.push_back(std::stod(cell));
    } catch (const std::exception&) {
      throw ContractViolation("read_trajectory_csv: not a number: '" + cell + "'");
    }
  }
  return values;
}

}  // namespace

void write_trajectory_csv(std::ostream& out, const Trajectory& u) {
  out << std::setprecision(17);
  const auto t = u.grid().nodes();
  for (std::size_t j = 0; j < t.size(); ++j) out << (j ? "," : "") << t[j];
  out << '\n';
  for (Eigen::Index i = 0; i < u.dim(); ++i) {
    for (int j = 0; j < u.node_count(); ++j) out << (j ? "," : "") << u.columns()(i, j);
    out << '\n';
  }
}

Trajectory read_trajectory_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ContractViolation("read_trajectory_csv: missing header");
  const auto times = parse_csv_row(line);
  if (times.empty()) throw ContractViolation("read_trajectory_csv: empty header");
  const int steps = static_cast<int>(times.size()) - 1;
  const TimeGrid grid(steps == 0 ? 1.0 : times.back(), steps);

  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    rows.push_back(parse_csv_row(line));
    if (rows.back().size() != times.size())
      throw ContractViolation("read_trajectory_csv: row " + std::to_string(rows.size()) +
                              " has the wrong number of columns");
  }
  Matrix columns(static_cast<Eigen::Index>(rows.size()), grid.node_count());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (int j = 0; j < grid.node_count(); ++j) columns(i, j) = rows[i][j];
  return Trajectory(grid, std::move(columns));
}

void write_trajectory_binary(std::ostream& out, const Trajectory& u) {
  out.write(kMagic.data(), kMagic.size());
  write_raw<std::uint64_t>(out, static_cast<std::uint64_t>(u.dim()));
  write_raw<std::uint64_t>(out, static_cast<std::uint64_t>(u.grid().steps()));
  write_raw<double>(out, u.grid().final_time());
  out.write(reinterpret_cast<const char*>(u.columns().data()),
            static_cast<std::streamsize>(u.columns().size() * sizeof(double)));
}

Trajectory read_trajectory_binary(std::istream& in) {
  std::array<char, 8> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic) throw ContractViolation("read_trajectory_binary: bad magic");
  const auto dim = read_raw<std::uint64_t>(in);
  const auto steps = read_raw<std::uint64_t>(in);
  const auto final_time = read_raw<double>(in);
  const TimeGrid grid(final_time, static_cast<int>(steps));
  Matrix columns(static_cast<Eigen::Index>(dim), grid.node_count());
  in.read(reinterpret_cast<char*>(columns.data()),
          static_cast<std::streamsize>(columns.size() * sizeof(double)));
  if (!in) throw ContractViolation("read_trajectory_binary: truncated payload");
  return Trajectory(grid, std::move(columns));
}

}  // namespace mormor
