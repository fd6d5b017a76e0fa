#pragma once

// Cascade records: parsing the one-line-per-cascade text format, windowing at
// the observation time, labeling, filtering, truncation and dataset splits.
//
// Canonical line format (single-space separated):
//   <cascade_id> <origin_user> <publish_unixtime> <num_paths> <path_1> ... <path_k>
// where each path is "u0/u1/.../um:t": user um joined at relative time t via
// that retweet chain.  The root post appears as a single-user path "u0:0".

#include <algorithm>
#include <array>
#include <cstdint>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace concat {

struct EventTriplet {
  std::string source_user;
  std::string target_user;
  double time = 0.0;  // relative to the root post (root at 0)
};

// One raw diffusion record as read from disk, times rebased and sorted.
struct RawCascadeRecord {
  std::string cascade_id;
  std::string origin_user;
  std::int64_t publish_time = 0;
  std::vector<EventTriplet> triplets;  // non-decreasing in time
};

// A windowed, labeled cascade: triplets with time <= observation_time and the
// incremental popularity counted over (observation_time, prediction_time].
struct Cascade {
  std::string cascade_id;
  std::string origin_user;
  std::int64_t publish_time = 0;
  std::vector<EventTriplet> triplets;
  double observation_time = 0.0;
  double prediction_time = 0.0;
  long label = 0;
};

struct ParseIssue {
  std::size_t line_number = 0;
  std::string message;
};

struct ParseResult {
  std::vector<RawCascadeRecord> records;
  std::vector<ParseIssue> issues;  // malformed or skipped lines
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line_no, const std::string& what)
      : std::runtime_error("line " + std::to_string(line_no) + ": " + what),
        line_number(line_no) {}
  std::size_t line_number;
};

namespace detail {

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

inline double parse_time(std::string_view tok, std::size_t line_no) {
  double v = 0.0;
  std::string buf(tok);
  std::size_t used = 0;
  try {
    v = std::stod(buf, &used);
  } catch (const std::exception&) {
    throw ParseError(line_no, "bad time value '" + buf + "'");
  }
  if (used != buf.size()) throw ParseError(line_no, "bad time value '" + buf + "'");
  return v;
}

}  // namespace detail

// Parses a single canonical line.  Throws ParseError on malformed input and
// on a retweet recorded before its parent joined (non-monotone chain).
inline RawCascadeRecord parse_cascade_line(std::string_view line, std::size_t line_no,
                                           double time_scale = 1.0) {
  auto tokens = detail::split(line, ' ');
  if (tokens.size() < 4) throw ParseError(line_no, "expected at least 4 fields");
  RawCascadeRecord rec;
  rec.cascade_id = std::string(tokens[0]);
  rec.origin_user = std::string(tokens[1]);
  if (rec.cascade_id.empty() || rec.origin_user.empty())
    throw ParseError(line_no, "empty cascade id or origin user");
  try {
    rec.publish_time = std::stoll(std::string(tokens[2]));
  } catch (const std::exception&) {
    throw ParseError(line_no, "bad publish time '" + std::string(tokens[2]) + "'");
  }
  long num_paths = 0;
  try {
    num_paths = std::stol(std::string(tokens[3]));
  } catch (const std::exception&) {
    throw ParseError(line_no, "bad path count '" + std::string(tokens[3]) + "'");
  }
  if (num_paths < 0 || static_cast<std::size_t>(num_paths) != tokens.size() - 4)
    throw ParseError(line_no, "path count does not match number of path fields");

  double root_time = 0.0;
  bool saw_root = false;
  // (chain, join time) per path, in file order
  struct PathEvent {
    std::string parent, user;
    double time;
  };
  std::vector<PathEvent> events;
  std::unordered_map<std::string, double> first_join;  // earliest join per user
  first_join[rec.origin_user] = 0.0;

  for (std::size_t p = 4; p < tokens.size(); ++p) {
    std::string_view path = tokens[p];
    std::size_t colon = path.rfind(':');
    if (colon == std::string_view::npos || colon + 1 == path.size())
      throw ParseError(line_no, "path missing ':<time>' suffix");
    double t = detail::parse_time(path.substr(colon + 1), line_no);
    auto chain = detail::split(path.substr(0, colon), '/');
    for (auto u : chain)
      if (u.empty()) throw ParseError(line_no, "empty user in path");
    if (chain.size() == 1) {
      if (std::string(chain[0]) != rec.origin_user)
        throw ParseError(line_no, "root path user does not match origin");
      if (saw_root) throw ParseError(line_no, "duplicate root path");
      saw_root = true;
      root_time = t;
      continue;
    }
    PathEvent ev;
    ev.parent = std::string(chain[chain.size() - 2]);
    ev.user = std::string(chain.back());
    ev.time = t;
    events.push_back(std::move(ev));
  }

  for (auto& ev : events) {
    double t = ev.time - root_time;
    if (t < 0.0)
      throw ParseError(line_no, "retweet at " + std::to_string(ev.time) +
                                    " precedes the root post");
    auto it = first_join.find(ev.parent);
    if (it != first_join.end() && it->second > t)
      throw ParseError(line_no, "retweet from '" + ev.parent +
                                    "' precedes that user's own join");
    auto jt = first_join.find(ev.user);
    if (jt == first_join.end() || jt->second > t) first_join[ev.user] = t;
    rec.triplets.push_back(EventTriplet{ev.parent, ev.user, t * time_scale});
  }
  std::stable_sort(rec.triplets.begin(), rec.triplets.end(),
                   [](const EventTriplet& a, const EventTriplet& b) { return a.time < b.time; });
  return rec;
}

// Parses a whole file; malformed or non-monotone lines are skipped and
// reported in `issues` instead of aborting the run.
inline ParseResult parse_dataset(const std::string& path, double time_scale = 1.0) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dataset file: " + path);
  ParseResult result;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    try {
      result.records.push_back(parse_cascade_line(line, line_no, time_scale));
    } catch (const ParseError& e) {
      result.issues.push_back(ParseIssue{e.line_number, e.what()});
    }
  }
  return result;
}

// Windows a record at t_s and counts the label over (t_s, t_p].
inline Cascade window_and_label(const RawCascadeRecord& rec, double t_s, double t_p) {
  if (!(t_s < t_p)) throw std::invalid_argument("observation time must precede prediction time");
  Cascade c;
  c.cascade_id = rec.cascade_id;
  c.origin_user = rec.origin_user;
  c.publish_time = rec.publish_time;
  c.observation_time = t_s;
  c.prediction_time = t_p;
  for (const auto& tr : rec.triplets) {
    if (tr.time <= t_s)
      c.triplets.push_back(tr);
    else if (tr.time <= t_p)
      ++c.label;
  }
  return c;
}

inline std::vector<Cascade> filter_cascades(std::vector<Cascade> cascades, std::size_t min_size) {
  if (min_size < 1) throw std::invalid_argument("min_size must be >= 1");
  std::erase_if(cascades, [min_size](const Cascade& c) { return c.triplets.size() < min_size; });
  return cascades;
}

// Keeps the earliest max_triplets observed events; ties broken by file order
// (the parse is stable, so file order survives the sort).
inline Cascade truncate_triplets(Cascade c, std::size_t max_triplets) {
  if (max_triplets == 0) throw std::invalid_argument("max_triplets must be positive");
  if (c.triplets.size() > max_triplets) c.triplets.resize(max_triplets);
  return c;
}

struct DatasetSplit {
  std::vector<Cascade> train, val, test;
};

// Deterministic shuffle under `seed`; val/test sizes are floored, the
// remainder goes to train.
inline DatasetSplit split_dataset(const std::vector<Cascade>& cascades,
                                  std::array<double, 3> ratios, std::uint64_t seed) {
  double sum = ratios[0] + ratios[1] + ratios[2];
  if (std::abs(sum - 1.0) > 1e-9) throw std::invalid_argument("split ratios must sum to 1");
  std::vector<std::size_t> order(cascades.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);

  const std::size_t n = cascades.size();
  const auto n_val = static_cast<std::size_t>(ratios[1] * static_cast<double>(n));
  const auto n_test = static_cast<std::size_t>(ratios[2] * static_cast<double>(n));
  const std::size_t n_train = n - n_val - n_test;

  DatasetSplit split;
  for (std::size_t i = 0; i < n; ++i) {
    const Cascade& c = cascades[order[i]];
    if (i < n_train)
      split.train.push_back(c);
    else if (i < n_train + n_val)
      split.val.push_back(c);
    else
      split.test.push_back(c);
  }
  return split;
}

}  // namespace concat
