#include "sonclust/datagen.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

namespace sonclust {

double Rng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  // u1 in (0, 1] so the log is finite; u2 in [0, 1)
  const double u1 = static_cast<double>((gen_() >> 11) + 1) * 0x1.0p-53;
  const double u2 = static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(angle);
  have_spare_ = true;
  return r * std::cos(angle);
}

LabeledDataset two_half_moons(int n, double noise_sd, std::uint64_t seed) {
  if (n < 2) {
    throw std::invalid_argument("two_half_moons: need n >= 2");
  }
  if (noise_sd < 0.0) {
    throw std::invalid_argument("two_half_moons: noise_sd must be nonnegative");
  }
  const int n_upper = (n + 1) / 2;
  const int n_lower = n - n_upper;

  LabeledDataset out;
  out.data.resize(2, n);
  out.labels.resize(static_cast<std::size_t>(n));
  Rng rng(seed);

  const auto arc_angle = [](int idx, int count) {
    return count > 1 ? std::numbers::pi * static_cast<double>(idx) / static_cast<double>(count - 1)
                     : 0.0;
  };
  for (int i = 0; i < n_upper; ++i) {
    const double t = arc_angle(i, n_upper);
    out.data(0, i) = std::cos(t) + noise_sd * rng.normal();
    out.data(1, i) = std::sin(t) + noise_sd * rng.normal();
    out.labels[static_cast<std::size_t>(i)] = 0;
  }
  for (int i = 0; i < n_lower; ++i) {
    const double t = arc_angle(i, n_lower);
    const int c = n_upper + i;
    out.data(0, c) = 1.0 - std::cos(t) + noise_sd * rng.normal();
    out.data(1, c) = 0.5 - std::sin(t) + noise_sd * rng.normal();
    out.labels[static_cast<std::size_t>(c)] = 1;
  }
  return out;
}

GaussianMixtureSpec unbalanced_gaussian_spec(int divisor) {
  if (divisor < 1) {
    throw std::invalid_argument("unbalanced_gaussian_spec: divisor must be >= 1");
  }
  GaussianMixtureSpec mix;
  mix.sizes = {2000, 2000, 2000, 100, 100, 100, 100, 100};
  for (int& s : mix.sizes) s = std::max(1, s / divisor);
  mix.means.resize(2, 8);
  mix.means << 2.0, 2.0, 2.0, 10.0, 10.0, 10.0, 10.0, 13.0,  // x
      4.0, 8.0, 12.0, 2.0, 5.5, 9.0, 12.5, 7.25;             // y
  mix.sds.resize(8);
  mix.sds << 0.5, 0.5, 0.5, 0.3, 0.3, 0.3, 0.3, 0.3;
  return mix;
}

LabeledDataset unbalanced_gaussian(std::uint64_t seed, const GaussianMixtureSpec& mix) {
  const auto components = static_cast<Eigen::Index>(mix.sizes.size());
  if (components == 0 || mix.means.cols() != components ||
      mix.sds.size() != components) {
    throw std::invalid_argument("unbalanced_gaussian: sizes, means, sds must agree");
  }
  int n = 0;
  for (int s : mix.sizes) {
    if (s < 1) throw std::invalid_argument("unbalanced_gaussian: component sizes must be >= 1");
    n += s;
  }
  const auto d = mix.means.rows();

  LabeledDataset out;
  out.data.resize(d, n);
  out.labels.resize(static_cast<std::size_t>(n));
  Rng rng(seed);
  int col = 0;
  for (Eigen::Index c = 0; c < components; ++c) {
    for (int s = 0; s < mix.sizes[static_cast<std::size_t>(c)]; ++s, ++col) {
      for (Eigen::Index r = 0; r < d; ++r) {
        out.data(r, col) = mix.means(r, c) + mix.sds[c] * rng.normal();
      }
      out.labels[static_cast<std::size_t>(col)] = static_cast<int>(c);
    }
  }
  out.data = scale_unit(out.data);
  return out;
}

LabeledDataset unbalanced_gaussian(std::uint64_t seed) {
  return unbalanced_gaussian(seed, unbalanced_gaussian_spec());
}

DataMatrix scale_unit(const DataMatrix& A, std::vector<int>* degenerate_coords) {
  DataMatrix out(A.rows(), A.cols());
  for (Eigen::Index r = 0; r < A.rows(); ++r) {
    const double lo = A.row(r).minCoeff();
    const double hi = A.row(r).maxCoeff();
    if (hi > lo) {
      out.row(r) = (A.row(r).array() - lo) / (hi - lo);
    } else {
      out.row(r).setConstant(0.5);
      if (degenerate_coords != nullptr) degenerate_coords->push_back(static_cast<int>(r));
    }
  }
  return out;
}

namespace {

std::vector<double> parse_csv_line(const std::string& line, int line_number) {
  std::vector<double> values;
  std::size_t pos = 0;
  while (pos <= line.size()) {
    std::size_t comma = line.find(',', pos);
    if (comma == std::string::npos) comma = line.size();
    std::size_t begin = pos;
    std::size_t end = comma;
    while (begin < end && (line[begin] == ' ' || line[begin] == '\t')) ++begin;
    while (end > begin && (line[end - 1] == ' ' || line[end - 1] == '\t' || line[end - 1] == '\r')) {
      --end;
    }
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(line.data() + begin, line.data() + end, value);
    if (ec != std::errc() || ptr != line.data() + end || begin == end) {
      throw std::runtime_error("csv parse error at line " + std::to_string(line_number) +
                               ": non-numeric cell '" + line.substr(pos, comma - pos) + "'");
    }
    values.push_back(value);
    if (comma == line.size()) break;
    pos = comma + 1;
  }
  return values;
}

bool blank_line(const std::string& line) {
  for (char ch : line) {
    if (ch != ' ' && ch != '\t' && ch != '\r') return false;
  }
  return true;
}

}  // namespace

DataMatrix load_csv(const std::string& path, bool rows_are_observations, bool skip_header) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("load_csv: cannot open '" + path + "'");
  }
  std::vector<std::vector<double>> rows;
  std::string line;
  int line_number = 0;
  bool header_pending = skip_header;
  while (std::getline(in, line)) {
    ++line_number;
    if (blank_line(line)) continue;
    if (header_pending) {
      header_pending = false;
      continue;
    }
    std::vector<double> values = parse_csv_line(line, line_number);
    if (!rows.empty() && values.size() != rows.front().size()) {
      throw std::runtime_error("csv parse error at line " + std::to_string(line_number) +
                               ": expected " + std::to_string(rows.front().size()) +
                               " cells, got " + std::to_string(values.size()));
    }
    rows.push_back(std::move(values));
  }
  if (rows.empty()) {
    throw std::runtime_error("load_csv: '" + path + "' holds no data rows");
  }

  const auto file_rows = static_cast<Eigen::Index>(rows.size());
  const auto file_cols = static_cast<Eigen::Index>(rows.front().size());
  DataMatrix A(rows_are_observations ? file_cols : file_rows,
               rows_are_observations ? file_rows : file_cols);
  for (Eigen::Index r = 0; r < file_rows; ++r) {
    for (Eigen::Index c = 0; c < file_cols; ++c) {
      const double v = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
      if (rows_are_observations) {
        A(c, r) = v;
      } else {
        A(r, c) = v;
      }
    }
  }
  return A;
}

void save_csv(const DataMatrix& A, const std::string& path, bool rows_are_observations) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("save_csv: cannot open '" + path + "' for writing");
  }
  const Eigen::Index file_rows = rows_are_observations ? A.cols() : A.rows();
  const Eigen::Index file_cols = rows_are_observations ? A.rows() : A.cols();
  char buffer[40];
  for (Eigen::Index r = 0; r < file_rows; ++r) {
    for (Eigen::Index c = 0; c < file_cols; ++c) {
      const double v = rows_are_observations ? A(c, r) : A(r, c);
      std::snprintf(buffer, sizeof(buffer), "%.17g", v);
      out << buffer;
      if (c + 1 < file_cols) out << ',';
    }
    out << '\n';
  }
  if (!out) {
    throw std::runtime_error("save_csv: write to '" + path + "' failed");
  }
}

}  // namespace sonclust
