#include "exomap/matching.hpp"

#include <algorithm>

#include "exomap/errors.hpp"

namespace exomap {

namespace {

struct BestPair {
  int best_index = -1;
  int best = 1 << 30;
  int second = 1 << 30;
};

BestPair bestTwo(const Descriptor& d, const std::vector<Descriptor>& pool) {
  BestPair out;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    const int dist = hammingDistance(d, pool[i]);
    if (dist < out.best) {
      out.second = out.best;
      out.best = dist;
      out.best_index = static_cast<int>(i);
    } else if (dist < out.second) {
      out.second = dist;
    }
  }
  return out;
}

}  // namespace

std::vector<DescriptorMatch> matchDescriptors(const Keyframe& query, const Keyframe& train,
                                              const MatchingConfig& config) {
  std::vector<DescriptorMatch> matches;
  if (query.descriptors.empty() || train.descriptors.empty()) return matches;

  // Cache the train-side best so mutuality is one lookup.
  std::vector<int> train_best(train.descriptors.size(), -1);
  for (std::size_t t = 0; t < train.descriptors.size(); ++t) {
    train_best[t] = bestTwo(train.descriptors[t], query.descriptors).best_index;
  }

  for (std::size_t q = 0; q < query.descriptors.size(); ++q) {
    const BestPair hit = bestTwo(query.descriptors[q], train.descriptors);
    if (hit.best_index < 0 || hit.best > config.hamming_cap) continue;
    if (hit.second < (1 << 30) &&
        static_cast<double>(hit.best) >= config.ratio * static_cast<double>(hit.second)) {
      continue;
    }
    if (train_best[static_cast<std::size_t>(hit.best_index)] != static_cast<int>(q)) continue;
    matches.push_back({static_cast<int>(q), hit.best_index, hit.best});
  }
  return matches;
}

std::vector<PlaceCandidate> retrieveCandidates(
    const Keyframe& query, const std::vector<Keyframe>& map_keyframes, int k,
    const MatchingConfig& config, const std::optional<std::unordered_set<int>>& allowed_nodes) {
  if (map_keyframes.empty()) throw InvalidArgumentError("retrieveCandidates: empty keyframe map");
  if (k < 1) throw InvalidArgumentError("retrieveCandidates: k must be >= 1");

  std::vector<PlaceCandidate> candidates;
  for (const auto& kf : map_keyframes) {
    if (allowed_nodes && !allowed_nodes->count(kf.node_id)) continue;
    const int score = static_cast<int>(matchDescriptors(query, kf, config).size());
    if (score > 0) candidates.push_back({kf.node_id, score});
  }
  std::sort(candidates.begin(), candidates.end(), [](const PlaceCandidate& a, const PlaceCandidate& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.node_id < b.node_id;
  });
  if (candidates.size() > static_cast<std::size_t>(k)) candidates.resize(static_cast<std::size_t>(k));
  return candidates;
}

}  // namespace exomap
