// Copyright 2026 The qcommit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Session engine: resolves strategy descriptors through a registry and
// drives the protocol modules to a terminal verdict.

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <tuple>
#include <variant>
#include <vector>

#include "qcommit/codebook.hpp"
#include "qcommit/cointoss.hpp"
#include "qcommit/commit_bitwise.hpp"
#include "qcommit/error.hpp"
#include "qcommit/sessions.hpp"
#include "qcommit/transcript.hpp"

namespace qcommit {

using StrategyFactory = std::function<std::unique_ptr<Strategy>(const StrategyDescriptor&)>;

class StrategyRegistry {
 public:
  /// Registry preloaded with every built-in strategy.
  static StrategyRegistry with_builtins() {
    StrategyRegistry r;
    r.add(Protocol::BitwiseCommit, Party::Alice, "honest", make<HonestBitwiseAlice>());
    r.add(Protocol::BitwiseCommit, Party::Alice, "cheat", make<CheatingBitwiseAlice>());
    r.add(Protocol::BitwiseCommit, Party::Bob, "honest", make<HonestBitwiseBob>());
    r.add(Protocol::BitwiseCommit, Party::Bob, "helstrom", make<HelstromBitwiseBob>());

    r.add(Protocol::CodebookCommit, Party::Alice, "honest", make<HonestCodebookAlice>());
    r.add(Protocol::CodebookCommit, Party::Alice, "multistring", make<MultistringCodebookAlice>());
    r.add(Protocol::CodebookCommit, Party::Bob, "honest", make<HonestCodebookBob>());

    r.add(Protocol::CoinToss, Party::Alice, "honest", [](const StrategyDescriptor& d) {
      return std::make_unique<CoinTossAlice>(AliceStrategy::honest(), d);
    });
    r.add(Protocol::CoinToss, Party::Alice, "tamper", [](const StrategyDescriptor& d) {
      int target = static_cast<int>(d.param("target", 0.0));
      std::optional<std::size_t> batches;
      if (d.has("batches")) batches = static_cast<std::size_t>(d.param("batches", 0.0));
      AliceStrategy plan = d.has("pairs")
                               ? AliceStrategy::tamper_pairs(static_cast<std::size_t>(d.param("pairs", 0.0)), target, batches)
                               : AliceStrategy::tamper(d.param("fraction", 1.0), target, batches);
      return std::make_unique<CoinTossAlice>(plan, d);
    });
    r.add(Protocol::CoinToss, Party::Bob, "honest", make<HonestCoinTossBob>());
    r.add(Protocol::CoinToss, Party::Bob, "best_of_m", [](const StrategyDescriptor& d) {
      return std::make_unique<BestOfMBob>(d, zero_prefix_score);
    });
    return r;
  }

  void add(Protocol protocol, Party party, std::string name, StrategyFactory factory) {
    factories_[{protocol, party, std::move(name)}] = std::move(factory);
  }

  bool contains(Protocol protocol, Party party, const std::string& name) const {
    return factories_.count({protocol, party, name}) != 0;
  }

  std::vector<std::string> names(Protocol protocol, Party party) const {
    std::vector<std::string> out;
    for (const auto& [key, _] : factories_)
      if (std::get<0>(key) == protocol && std::get<1>(key) == party) out.push_back(std::get<2>(key));
    return out;
  }

  std::unique_ptr<Strategy> make(Protocol protocol, const StrategyDescriptor& d) const {
    auto it = factories_.find({protocol, d.party, d.name});
    if (it == factories_.end()) {
      throw Error(Errc::UnknownStrategy, "no " + std::string(to_string(d.party)) + " strategy '" + d.name + "' for " +
                                             std::string(to_string(protocol)));
    }
    return it->second(d);
  }

  /// make() plus a type check against the protocol's plug-in interface.
  template <class Interface>
  std::unique_ptr<Interface> make_as(Protocol protocol, const StrategyDescriptor& d) const {
    auto base = make(protocol, d);
    auto* typed = dynamic_cast<Interface*>(base.get());
    if (!typed) throw Error(Errc::UnknownStrategy, "strategy '" + d.name + "' does not fit this protocol role");
    base.release();
    return std::unique_ptr<Interface>(typed);
  }

 private:
  template <class T>
  static StrategyFactory make() {
    return [](const StrategyDescriptor& d) { return std::make_unique<T>(d); };
  }

  std::map<std::tuple<Protocol, Party, std::string>, StrategyFactory> factories_;
};

inline const StrategyRegistry& builtin_strategies() {
  static const StrategyRegistry r = StrategyRegistry::with_builtins();
  return r;
}

/// Parses "name" or "name:key=value,key=value".
inline StrategyDescriptor parse_strategy(Party party, std::string_view text) {
  StrategyDescriptor d{party, {}, {}};
  auto colon = text.find(':');
  d.name = std::string(text.substr(0, colon));
  if (d.name.empty()) throw Error(Errc::UnknownStrategy, "empty strategy name");
  if (colon == std::string_view::npos) return d;
  std::string_view rest = text.substr(colon + 1);
  while (!rest.empty()) {
    auto comma = rest.find(',');
    std::string_view item = rest.substr(0, comma);
    auto eq = item.find('=');
    if (eq == std::string_view::npos || eq == 0) {
      throw Error(Errc::InvalidSpec, "strategy parameter '" + std::string(item) + "' is not key=value");
    }
    std::string value(item.substr(eq + 1));
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(value, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != value.size() || value.empty()) {
      throw Error(Errc::InvalidSpec, "strategy parameter value '" + value + "' is not a number");
    }
    d.parameters[std::string(item.substr(0, eq))] = v;
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
  }
  return d;
}

using SessionParams = std::variant<SecurityParams, CodebookParams, CoinTossParams>;

/// Drives one session. For CoinToss, `seed` replaces params.seed.
inline Transcript run_session(Protocol protocol, const SessionParams& params, const StrategyDescriptor& alice,
                              const StrategyDescriptor& bob, std::uint64_t seed,
                              const StrategyRegistry& registry = builtin_strategies()) {
  if (alice.party != Party::Alice || bob.party != Party::Bob) {
    throw Error(Errc::DomainError, "strategy descriptors are assigned to the wrong parties");
  }
  switch (protocol) {
    case Protocol::BitwiseCommit: {
      const auto* p = std::get_if<SecurityParams>(&params);
      if (!p) throw Error(Errc::DomainError, "BitwiseCommit needs SecurityParams");
      auto a = registry.make_as<BitwiseAlice>(protocol, alice);
      auto b = registry.make_as<BitwiseBob>(protocol, bob);
      return run_bitwise_session(*p, *a, *b, seed);
    }
    case Protocol::CodebookCommit: {
      const auto* p = std::get_if<CodebookParams>(&params);
      if (!p) throw Error(Errc::DomainError, "CodebookCommit needs CodebookParams");
      auto a = registry.make_as<CodebookAlice>(protocol, alice);
      auto b = registry.make_as<CodebookBob>(protocol, bob);
      auto codebook = build_codebook(*p);
      return run_codebook_session(codebook, *p, *a, *b, seed);
    }
    case Protocol::CoinToss: {
      const auto* p = std::get_if<CoinTossParams>(&params);
      if (!p) throw Error(Errc::DomainError, "CoinToss needs CoinTossParams");
      auto a = registry.make_as<CoinTossAlice>(protocol, alice);
      auto b = registry.make_as<CoinTossBob>(protocol, bob);
      CoinTossParams q = *p;
      q.seed = seed;
      return run_coin_toss(q, *a, *b).transcript;
    }
  }
  throw Error(Errc::DomainError, "unknown protocol");
}

}  // namespace qcommit
