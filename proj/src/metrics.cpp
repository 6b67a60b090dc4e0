#include "podvs/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace podvs {

void MetricConfig::validate() const {
  if (repeats < 1) throw ConfigError("repeats: must be >= 1");
  if (kld_bins < 2) throw ConfigError("kld_bins: must be >= 2");
  if (!(kld_epsilon > 0.0)) throw ConfigError("kld_epsilon: must be positive");
  if (!(nss_threshold > 0.0 && nss_threshold < 1.0)) throw ConfigError("nss_threshold: must be in (0, 1)");
}

FixationSet::FixationSet(const std::vector<FixationRecord>& records) {
  for (const auto& r : records) add(r);
}

void FixationSet::add(const FixationRecord& r) {
  by_video_[r.video][r.frame].push_back({r.x, r.y});
  ++count_;
}

std::vector<std::string> FixationSet::videos() const {
  std::vector<std::string> out;
  for (const auto& [v, _] : by_video_) out.push_back(v);
  return out;
}

std::vector<int> FixationSet::frames(const std::string& video) const {
  std::vector<int> out;
  if (auto it = by_video_.find(video); it != by_video_.end())
    for (const auto& [f, _] : it->second) out.push_back(f);
  return out;
}

std::vector<Point> FixationSet::at(const std::string& video, int frame) const {
  if (auto it = by_video_.find(video); it != by_video_.end())
    if (auto jt = it->second.find(frame); jt != it->second.end()) return jt->second;
  return {};
}

std::vector<Point> FixationSet::pool_excluding(const std::string& video) const {
  std::vector<Point> out;
  for (const auto& [v, frames] : by_video_) {
    if (v == video) continue;
    for (const auto& [_, pts] : frames) out.insert(out.end(), pts.begin(), pts.end());
  }
  return out;
}

double sample_at(const FieldMap& m, Point p) {
  const auto x = std::clamp<Eigen::Index>(p.x, 0, m.cols() - 1);
  const auto y = std::clamp<Eigen::Index>(p.y, 0, m.rows() - 1);
  return m(y, x);
}

double auc_from_samples(const std::vector<double>& pos, const std::vector<double>& neg) {
  if (pos.empty() || neg.empty()) throw Error("AUC needs positive and negative samples");
  struct Item {
    double v;
    bool positive;
  };
  std::vector<Item> all;
  all.reserve(pos.size() + neg.size());
  for (double v : pos) all.push_back({v, true});
  for (double v : neg) all.push_back({v, false});
  std::sort(all.begin(), all.end(), [](const Item& a, const Item& b) { return a.v < b.v; });

  // Mann-Whitney U with mid-ranks for ties.
  double rank_sum = 0.0;
  for (std::size_t i = 0; i < all.size();) {
    std::size_t j = i;
    while (j < all.size() && all[j].v == all[i].v) ++j;
    const double mid = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k)
      if (all[k].positive) rank_sum += mid;
    i = j;
  }
  const double np = static_cast<double>(pos.size());
  const double nn = static_cast<double>(neg.size());
  return (rank_sum - np * (np + 1.0) / 2.0) / (np * nn);
}

namespace {

std::vector<double> histogram(const std::vector<double>& v, int bins, double eps) {
  std::vector<double> h(bins, 0.0);
  for (double x : v) {
    const double c = std::clamp(x, 0.0, 1.0);
    h[std::min(bins - 1, static_cast<int>(c * bins))] += 1.0;
  }
  const double n = static_cast<double>(v.size());
  for (double& x : h) x = (x / n + eps) / (1.0 + bins * eps);
  return h;
}

// FNV-1a, so derived seeds do not depend on the standard library's hash.
std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

template <typename Score>
ShuffledScore shuffled(const VideoMaps& maps, const FixationSet& fix, const FixationSet& pool, const MetricConfig& cfg,
                       Score&& score) {
  cfg.validate();
  if (fix.empty()) throw Error("no fixations");
  ShuffledScore out;
  double video_sum = 0.0;
  for (const auto& video : fix.videos()) {
    const auto negatives = pool.pool_excluding(video);
    if (negatives.empty()) throw Error("no fixations from other videos for '" + video + "'");
    const auto mit = maps.find(video);

    double frame_sum = 0.0;
    int frames = 0;
    for (int f : fix.frames(video)) {
      const auto pts = fix.at(video, f);
      if (pts.empty() || mit == maps.end() || f < 0 || f >= static_cast<int>(mit->second.size())) {
        ++out.coverage.frames_skipped;
        continue;
      }
      const FieldMap& m = mit->second[f];
      std::vector<double> pos;
      for (const auto& p : pts) pos.push_back(sample_at(m, p));

      std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                        static_cast<std::uint32_t>(fnv1a(video)), static_cast<std::uint32_t>(fnv1a(video) >> 32),
                        static_cast<std::uint32_t>(f)};
      std::mt19937_64 rng(seq);
      std::uniform_int_distribution<std::size_t> pick(0, negatives.size() - 1);

      double rep_sum = 0.0;
      std::vector<double> neg(pos.size());
      for (int r = 0; r < cfg.repeats; ++r) {
        for (auto& v : neg) v = sample_at(m, negatives[pick(rng)]);
        rep_sum += score(pos, neg);
      }
      frame_sum += rep_sum / cfg.repeats;
      ++frames;
      ++out.coverage.frames_scored;
    }
    if (frames == 0) continue;
    const double v = frame_sum / frames;
    out.per_video[video] = v;
    video_sum += v;
    ++out.coverage.videos;
  }
  if (out.coverage.videos == 0) throw Error("no frame had both fixations and a saliency map");
  out.value = video_sum / out.coverage.videos;
  return out;
}

}  // namespace

double kl_from_samples(const std::vector<double>& pos, const std::vector<double>& neg, int bins, double epsilon) {
  if (pos.empty() || neg.empty()) throw Error("KL divergence needs two non-empty samples");
  const auto p = histogram(pos, bins, epsilon);
  const auto q = histogram(neg, bins, epsilon);
  double kl = 0.0;
  for (int i = 0; i < bins; ++i) kl += p[i] * std::log(p[i] / q[i]);
  return std::max(0.0, kl);
}

ShuffledScore shuffled_auc(const VideoMaps& maps, const FixationSet& fix, const FixationSet& pool,
                           const MetricConfig& cfg) {
  return shuffled(maps, fix, pool, cfg, auc_from_samples);
}

ShuffledScore shuffled_kld(const VideoMaps& maps, const FixationSet& fix, const FixationSet& pool,
                           const MetricConfig& cfg) {
  return shuffled(maps, fix, pool, cfg, [&](const std::vector<double>& p, const std::vector<double>& n) {
    return kl_from_samples(p, n, cfg.kld_bins, cfg.kld_epsilon);
  });
}

double pcc(const FieldMap& a, const FieldMap& b) {
  if (dims_of(a) != dims_of(b)) throw DimensionError("pcc: maps differ in size");
  const FieldMap da = a - a.mean();
  const FieldMap db = b - b.mean();
  const double va = da.square().sum();
  const double vb = db.square().sum();
  if (!(va > 0.0) || !(vb > 0.0)) throw Error("undefined correlation: a map has zero variance");
  return std::clamp((da * db).sum() / std::sqrt(va * vb), -1.0, 1.0);
}

double nss(const FieldMap& reference, const FieldMap& test, double threshold) {
  if (dims_of(reference) != dims_of(test)) throw DimensionError("nss: maps differ in size");
  const auto mask = (reference >= threshold);
  const auto n = mask.count();
  if (n == 0) throw Error("nss: no reference pixel reaches the threshold");
  return mask.select(test, 0.0).sum() / static_cast<double>(n);
}

}  // namespace podvs
