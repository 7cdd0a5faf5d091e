#pragma once

#include <optional>
#include <unordered_set>
#include <vector>

#include "exomap/keyframe.hpp"

namespace exomap {

struct MatchingConfig {
  int hamming_cap = 64;  // reject matches farther than this
  double ratio = 0.8;    // Lowe-style ratio test against the second best
};

struct DescriptorMatch {
  int query_index = -1;
  int train_index = -1;
  int distance = 0;
};

/// Mutual-nearest-neighbor binary descriptor matching with a distance cap and
/// ratio test. Deterministic: matches are ordered by query index.
std::vector<DescriptorMatch> matchDescriptors(const Keyframe& query, const Keyframe& train,
                                              const MatchingConfig& config = {});

struct PlaceCandidate {
  int node_id = -1;
  int score = 0;  // match count
};

/// Ranks map keyframes by descriptor-set similarity to the query. Only nodes
/// with at least one match appear; ties order by node id. An optional node
/// filter restricts the search (room-class prefilter hook).
std::vector<PlaceCandidate> retrieveCandidates(
    const Keyframe& query, const std::vector<Keyframe>& map_keyframes, int k,
    const MatchingConfig& config = {},
    const std::optional<std::unordered_set<int>>& allowed_nodes = std::nullopt);

}  // namespace exomap
