#include "cnk/problems/libsvm.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>

#include "cnk/error.hpp"

namespace cnk {

namespace {

bool parse_double(std::string_view text, double& out) {
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  if (text.empty()) return false;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size() && std::isfinite(out);
}

bool parse_index(std::string_view text, Index& out) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) return false;
  out = static_cast<Index>(v);
  return true;
}

std::vector<double> normalize_labels(const std::vector<double>& raw) {
  const std::set<double> distinct(raw.begin(), raw.end());
  const bool already_signed =
      std::all_of(distinct.begin(), distinct.end(), [](double v) { return v == 1.0 || v == -1.0; });
  if (already_signed) return raw;
  if (distinct.size() > 2) {
    throw Error(ErrorCode::ParseError, "more than two distinct labels (" + std::to_string(distinct.size()) + ")");
  }
  std::vector<double> out(raw.size());
  if (distinct.size() == 1) {
    std::transform(raw.begin(), raw.end(), out.begin(), [](double v) { return v > 0.0 ? 1.0 : -1.0; });
    return out;
  }
  const double low = *distinct.begin();
  std::transform(raw.begin(), raw.end(), out.begin(), [low](double v) { return v == low ? -1.0 : 1.0; });
  return out;
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

DenseMatrix Dataset::dense_samples() const {
  DenseMatrix a = DenseMatrix::Zero(d, p);
  for (const auto& e : entries) a(e.feature - 1, e.sample) = e.value;
  return a;
}

double Dataset::density() const {
  if (d == 0 || p == 0) return 0.0;
  return static_cast<double>(entries.size()) / (static_cast<double>(d) * static_cast<double>(p));
}

Dataset parse_libsvm(std::istream& in, const LibsvmOptions& options) {
  Dataset ds;
  std::vector<double> raw_labels;
  Index max_index = 0;
  std::string line;
  std::size_t line_no = 0;

  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream tokens(line);
    std::string token;
    if (!(tokens >> token)) continue;

    double label = 0.0;
    if (!parse_double(token, label)) throw ParseError(line_no, "bad label '" + token + "'");

    const Index sample = ds.p;
    Index previous = 0;
    while (tokens >> token) {
      const auto colon = token.find(':');
      if (colon == std::string::npos) throw ParseError(line_no, "expected index:value, got '" + token + "'");
      Index index = 0;
      double value = 0.0;
      if (!parse_index(std::string_view(token).substr(0, colon), index) || index < 1) {
        throw ParseError(line_no, "bad feature index in '" + token + "'");
      }
      if (!parse_double(std::string_view(token).substr(colon + 1), value)) {
        throw ParseError(line_no, "bad feature value in '" + token + "'");
      }
      if (index <= previous) throw ParseError(line_no, "feature indices must be strictly increasing");
      previous = index;
      max_index = std::max(max_index, index);
      ds.entries.push_back({sample, index, value});
    }
    raw_labels.push_back(label);
    ++ds.p;
  }

  if (options.dimension) {
    if (*options.dimension < max_index) {
      throw Error(ErrorCode::DimensionMismatch, "dimension override " + std::to_string(*options.dimension) +
                                                    " is below the largest feature index " +
                                                    std::to_string(max_index));
    }
    ds.d = *options.dimension;
  } else {
    ds.d = max_index;
  }
  ds.labels = normalize_labels(raw_labels);
  return ds;
}

Dataset read_libsvm(const std::filesystem::path& path, const LibsvmOptions& options) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  return parse_libsvm(in, options);
}

void write_libsvm(std::ostream& out, const Dataset& dataset) {
  auto it = dataset.entries.begin();
  for (Index i = 0; i < dataset.p; ++i) {
    out << (dataset.labels[static_cast<std::size_t>(i)] > 0 ? "+1" : "-1");
    for (; it != dataset.entries.end() && it->sample == i; ++it) {
      out << ' ' << it->feature << ':' << format_number(it->value);
    }
    out << '\n';
  }
}

Dataset scale_min_max(const Dataset& dataset) {
  std::map<Index, std::pair<double, double>> range;
  for (const auto& e : dataset.entries) {
    auto [pos, inserted] = range.try_emplace(e.feature, e.value, e.value);
    if (!inserted) {
      pos->second.first = std::min(pos->second.first, e.value);
      pos->second.second = std::max(pos->second.second, e.value);
    }
  }
  Dataset out = dataset;
  for (auto& e : out.entries) {
    const auto [lo, hi] = range.at(e.feature);
    e.value = hi > lo ? 2.0 * (e.value - lo) / (hi - lo) - 1.0 : 0.0;
  }
  return out;
}

}  // namespace cnk
