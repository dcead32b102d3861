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

// Session records shared by all protocols: parties, messages, a per-protocol
// message grammar, the strategy base class, and the JSON-lines transcript
// format.
//
// Transcript format (version 1), one JSON object per line:
//
//   {"type":"header","format":"qcommit-transcript","version":1,
//    "protocol":"CoinToss","seed":7,"params":{...},
//    "alice":{"name":"honest","parameters":{}},"bob":{...}}
//   {"type":"message","seq":1,"sender":"Alice","kind":"batches","payload":{...}}
//   ...
//   {"type":"footer","verdict":"Completed","messages":4,"details":{...}}
//
// Keys inside each object are sorted. Floats carry 17 significant digits.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qcommit/error.hpp"
#include "qcommit/json_io.hpp"

namespace qcommit {

inline constexpr int kTranscriptFormatVersion = 1;
inline constexpr std::string_view kTranscriptFormatName = "qcommit-transcript";

enum class Party { Alice, Bob };
enum class Protocol { BitwiseCommit, CodebookCommit, CoinToss };

constexpr std::string_view to_string(Party p) { return p == Party::Alice ? "Alice" : "Bob"; }
constexpr Party other(Party p) { return p == Party::Alice ? Party::Bob : Party::Alice; }

constexpr std::string_view to_string(Protocol p) {
  switch (p) {
    case Protocol::BitwiseCommit: return "BitwiseCommit";
    case Protocol::CodebookCommit: return "CodebookCommit";
    case Protocol::CoinToss: return "CoinToss";
  }
  return "?";
}

inline std::optional<Party> parse_party(std::string_view s) {
  if (s == "Alice") return Party::Alice;
  if (s == "Bob") return Party::Bob;
  return std::nullopt;
}

inline std::optional<Protocol> parse_protocol(std::string_view s) {
  if (s == "BitwiseCommit") return Protocol::BitwiseCommit;
  if (s == "CodebookCommit") return Protocol::CodebookCommit;
  if (s == "CoinToss") return Protocol::CoinToss;
  return std::nullopt;
}

/// Stable verdict strings.
namespace verdict {
inline constexpr std::string_view kAccepted = "Accepted";
inline constexpr std::string_view kRejected = "Rejected";
inline constexpr std::string_view kCompleted = "Completed";
inline constexpr std::string_view kCheatDetected = "CheatDetected";
}  // namespace verdict

struct Message {
  std::uint64_t seq = 0;
  Party sender = Party::Alice;
  std::string kind;
  json payload = json::object();

  friend bool operator==(const Message&, const Message&) = default;
};

struct StrategyDescriptor {
  Party party = Party::Alice;
  std::string name;
  std::map<std::string, double> parameters;

  double param(const std::string& key, double fallback) const {
    auto it = parameters.find(key);
    return it == parameters.end() ? fallback : it->second;
  }
  bool has(const std::string& key) const { return parameters.count(key) != 0; }

  friend bool operator==(const StrategyDescriptor&, const StrategyDescriptor&) = default;
};

struct Transcript {
  Protocol protocol = Protocol::BitwiseCommit;
  json params = json::object();
  std::uint64_t seed = 0;
  StrategyDescriptor alice{Party::Alice, "", {}};
  StrategyDescriptor bob{Party::Bob, "", {}};
  std::vector<Message> messages;
  std::string verdict;
  json details = json::object();

  friend bool operator==(const Transcript&, const Transcript&) = default;
};

//============================================================================
// Grammar
//============================================================================

struct GrammarStep {
  Party sender;
  std::string_view kind;
};

/// Message order of each protocol. A session may stop early only after a
/// step listed as terminal.
struct Grammar {
  std::vector<GrammarStep> steps;
  std::vector<std::string_view> early_exit_after;
};

inline const Grammar& grammar(Protocol p) {
  static const Grammar bitwise{{{Party::Alice, "commit"},
                                {Party::Bob, "ready"},
                                {Party::Alice, "unveil"},
                                {Party::Bob, "verdict"}},
                               {}};
  static const Grammar codebook{{{Party::Alice, "commit"},
                                 {Party::Bob, "ready"},
                                 {Party::Alice, "unveil"},
                                 {Party::Bob, "verdict"}},
                                {}};
  static const Grammar cointoss{{{Party::Alice, "batches"},
                                 {Party::Bob, "choose"},
                                 {Party::Alice, "reveal"},
                                 {Party::Bob, "test_result"},
                                 {Party::Alice, "measure"},
                                 {Party::Bob, "measure"}},
                                {"test_result"}};
  switch (p) {
    case Protocol::BitwiseCommit: return bitwise;
    case Protocol::CodebookCommit: return codebook;
    case Protocol::CoinToss: return cointoss;
  }
  return bitwise;
}

/// True if two consecutive steps in the grammar share a sender at position i.
inline bool grammar_allows_consecutive(Protocol p, std::size_t i) {
  const auto& g = grammar(p).steps;
  return i > 0 && i < g.size() && g[i].sender == g[i - 1].sender;
}

/// Checks seq monotonicity, sender alternation, and the protocol grammar.
/// Returns an empty string when valid, otherwise a description.
inline std::string validate_messages(Protocol p, const std::vector<Message>& messages) {
  const auto& g = grammar(p);
  if (messages.size() > g.steps.size()) return "more messages than the protocol grammar allows";
  for (std::size_t i = 0; i < messages.size(); ++i) {
    const auto& m = messages[i];
    if (i > 0 && m.seq <= messages[i - 1].seq) return "seq is not strictly increasing at message " + std::to_string(i);
    if (i > 0 && m.sender == messages[i - 1].sender && !grammar_allows_consecutive(p, i)) {
      return "senders do not alternate at message " + std::to_string(i);
    }
    if (m.sender != g.steps[i].sender || m.kind != g.steps[i].kind) {
      return "message " + std::to_string(i) + " is " + std::string(to_string(m.sender)) + "/" + m.kind +
             ", expected " + std::string(to_string(g.steps[i].sender)) + "/" + std::string(g.steps[i].kind);
    }
  }
  return {};
}

//============================================================================
// Strategies and the session log
//============================================================================

/// Base of every pluggable party behaviour. The session log delivers to
/// each strategy only the messages addressed to its party; quantum payloads
/// never appear in messages.
class Strategy {
 public:
  explicit Strategy(StrategyDescriptor descriptor) : descriptor_(std::move(descriptor)) {}
  virtual ~Strategy() = default;
  Strategy(const Strategy&) = delete;
  Strategy& operator=(const Strategy&) = delete;

  const StrategyDescriptor& descriptor() const { return descriptor_; }
  Party party() const { return descriptor_.party; }

  virtual void observe(const Message& message) { inbox_.push_back(message); }
  const std::vector<Message>& inbox() const { return inbox_; }

 private:
  StrategyDescriptor descriptor_;
  std::vector<Message> inbox_;
};

/// Records one session. Enforces the grammar on every send and delivers
/// each message to the receiving party's strategy.
class SessionLog {
 public:
  SessionLog(Protocol protocol, json params, std::uint64_t seed, Strategy* alice, Strategy* bob)
      : alice_(alice), bob_(bob) {
    t_.protocol = protocol;
    t_.params = std::move(params);
    t_.seed = seed;
    if (alice) t_.alice = alice->descriptor();
    if (bob) t_.bob = bob->descriptor();
  }

  const Message& send(Party sender, std::string kind, json payload = json::object()) {
    if (finished_) throw Error(Errc::ProtocolViolation, "send after the session finished");
    const auto& g = grammar(t_.protocol).steps;
    std::size_t i = t_.messages.size();
    if (i >= g.size() || g[i].sender != sender || g[i].kind != kind) {
      throw Error(Errc::ProtocolViolation, std::string(to_string(sender)) + " sent '" + kind + "' out of order");
    }
    Message m{++seq_, sender, std::move(kind), std::move(payload)};
    t_.messages.push_back(m);
    Strategy* receiver = sender == Party::Alice ? bob_ : alice_;
    if (receiver) receiver->observe(t_.messages.back());
    return t_.messages.back();
  }

  const std::vector<Message>& messages() const { return t_.messages; }

  Transcript finish(std::string_view verdict, json details = json::object()) {
    if (finished_) throw Error(Errc::ProtocolViolation, "session finished twice");
    const auto& g = grammar(t_.protocol);
    std::size_t n = t_.messages.size();
    bool complete = n == g.steps.size();
    bool early = n > 0 && std::find(g.early_exit_after.begin(), g.early_exit_after.end(),
                                    std::string_view(t_.messages.back().kind)) != g.early_exit_after.end();
    if (!complete && !early) throw Error(Errc::ProtocolViolation, "session ended before the grammar completed");
    finished_ = true;
    t_.verdict = std::string(verdict);
    t_.details = std::move(details);
    return t_;
  }

 private:
  Transcript t_;
  Strategy* alice_;
  Strategy* bob_;
  std::uint64_t seq_ = 0;
  bool finished_ = false;
};

//============================================================================
// Serialization
//============================================================================

inline json to_json(const StrategyDescriptor& d) {
  json params = json::object();
  for (const auto& [k, v] : d.parameters) params[k] = v;
  return json{{"name", d.name}, {"parameters", params}};
}

inline std::string serialize(const Transcript& t) {
  std::string out;
  json header{{"type", "header"},
              {"format", std::string(kTranscriptFormatName)},
              {"version", kTranscriptFormatVersion},
              {"protocol", std::string(to_string(t.protocol))},
              {"seed", t.seed},
              {"params", t.params},
              {"alice", to_json(t.alice)},
              {"bob", to_json(t.bob)}};
  out += dump_json(header);
  out.push_back('\n');
  for (const auto& m : t.messages) {
    json line{{"type", "message"},
              {"seq", m.seq},
              {"sender", std::string(to_string(m.sender))},
              {"kind", m.kind},
              {"payload", m.payload}};
    out += dump_json(line);
    out.push_back('\n');
  }
  json footer{{"type", "footer"}, {"verdict", t.verdict}, {"messages", t.messages.size()}, {"details", t.details}};
  out += dump_json(footer);
  out.push_back('\n');
  return out;
}

namespace detail {

inline StrategyDescriptor descriptor_from_json(const json& j, Party party) {
  StrategyDescriptor d{party, j.at("name").get<std::string>(), {}};
  for (auto it = j.at("parameters").begin(); it != j.at("parameters").end(); ++it) {
    d.parameters[it.key()] = it.value().get<double>();
  }
  return d;
}

}  // namespace detail

inline Transcript deserialize(std::string_view text) {
  std::vector<std::string> lines;
  {
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty()) lines.push_back(line);
    }
  }
  if (lines.size() < 2) throw Error(Errc::DeserializeError, "transcript needs a header and a footer line");
  Transcript t;
  try {
    json header = json::parse(lines.front());
    if (header.at("type") != "header" || header.at("format") != kTranscriptFormatName) {
      throw Error(Errc::DeserializeError, "first line is not a transcript header");
    }
    if (header.at("version").get<int>() != kTranscriptFormatVersion) {
      throw Error(Errc::DeserializeError, "unsupported transcript version");
    }
    auto protocol = parse_protocol(header.at("protocol").get<std::string>());
    if (!protocol) throw Error(Errc::DeserializeError, "unknown protocol in header");
    t.protocol = *protocol;
    t.seed = header.at("seed").get<std::uint64_t>();
    t.params = header.at("params");
    t.alice = detail::descriptor_from_json(header.at("alice"), Party::Alice);
    t.bob = detail::descriptor_from_json(header.at("bob"), Party::Bob);

    for (std::size_t i = 1; i + 1 < lines.size(); ++i) {
      json line = json::parse(lines[i]);
      if (line.at("type") != "message") throw Error(Errc::DeserializeError, "expected a message line");
      auto sender = parse_party(line.at("sender").get<std::string>());
      if (!sender) throw Error(Errc::DeserializeError, "unknown sender");
      t.messages.push_back(
          Message{line.at("seq").get<std::uint64_t>(), *sender, line.at("kind").get<std::string>(), line.at("payload")});
    }

    json footer = json::parse(lines.back());
    if (footer.at("type") != "footer") throw Error(Errc::DeserializeError, "last line is not a footer");
    if (footer.at("messages").get<std::size_t>() != t.messages.size()) {
      throw Error(Errc::DeserializeError, "footer message count does not match");
    }
    t.verdict = footer.at("verdict").get<std::string>();
    t.details = footer.at("details");
  } catch (const json::exception& e) {
    throw Error(Errc::DeserializeError, e.what());
  }
  if (auto problem = validate_messages(t.protocol, t.messages); !problem.empty()) {
    throw Error(Errc::DeserializeError, problem);
  }
  return t;
}

}  // namespace qcommit
