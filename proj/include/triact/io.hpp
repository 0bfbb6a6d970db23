#pragma once

#include <string>
#include <utility>
#include <vector>

#include "triact/action.hpp"

namespace triact {

inline constexpr const char* kDumpHeader = "triact-dump v1";
inline constexpr const char* kG0Header = "triact-g0 v1";
inline constexpr const char* kPlacementPolicy = "central-right-v1";

// Key/value annotations riding along with a state (build parameters,
// instance name). Keys are single tokens; dumps store them sorted by key.
using ConfigKV = std::vector<std::pair<std::string, std::string>>;

// Canonical text form: LF line endings, single-space token separators,
// sections and config keys sorted, map pairs sorted by source id within
// each generator. Equal state + equal config give equal bytes.
std::string dump_state(const ActionState& st, const ConfigKV& config = {});

struct LoadedDump {
  ActionState state;
  ConfigKV config;
};

// Strict reader. Malformed or non-canonical input fails with
// "parse error at offset N: ...". A file that parses but violates a state
// invariant fails with the first broken check named — duplicated map pairs
// as "injectivity(<gen>,<src>)", everything else through the same sweep
// that guards live mutation.
LoadedDump load_dump(const std::string& bytes);

// Standalone seed-group files: the [g0] dump section plus its own header.
std::string dump_g0(const G0Spec& g0);
G0Spec parse_g0(const std::string& bytes);

// Re-executes a logged construction from init_state(g0). Each replayed
// step — rejected ones included — must reproduce its log entry exactly;
// throws G0Error naming the first divergent index. word_bound and
// classify_budget must match the original build for join re-checks.
ActionState replay_log(const G0Spec& g0, const std::vector<StageEntry>& log,
                       int word_bound, long classify_budget = 200000);

}  // namespace triact
