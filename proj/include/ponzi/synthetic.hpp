#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ponzi/dataset.hpp"

namespace ponzi {

// Template-based generator for the bundled test corpus: "ponzi-like"
// payout-chain contracts (label 1) and benign token/escrow/vault contracts
// (label 0). Everything stays inside the parser subset; the occasional event
// declaration exercises the opaque-node path.
std::string make_ponzi_contract(std::uint64_t seed, int index);
std::string make_benign_contract(std::uint64_t seed, int index);

// Alternating labeled records, ids "c0000", "c0001", ...
std::vector<DatasetRecord> make_synthetic_dataset(int count, std::uint64_t seed);

// Unlabeled sources forming two vocabulary clusters (the ponzi and benign
// template families).
std::vector<std::string> make_two_cluster_corpus(int count, std::uint64_t seed);

}  // namespace ponzi
