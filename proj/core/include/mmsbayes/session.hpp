#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mmsbayes/classifier.hpp"
#include "mmsbayes/conjugate.hpp"
#include "mmsbayes/tally.hpp"

namespace mmsbayes {

// A classroom run. Bags may only be added once the prior is locked, and the
// locked prior never changes.
struct Session {
  std::string id;
  std::string created_at;
  std::optional<BetaParams> prior;
  bool prior_locked = false;
  std::vector<BagTally> bags;
  bool revealed = false;
  std::uint64_t sequence = 0;  // sequence number of the latest event

  friend bool operator==(const Session&, const Session&) = default;
};

enum class EventKind { created, prior_set, prior_locked, bag_added, revealed };

std::string_view to_string(EventKind kind);
EventKind event_kind_from_string(std::string_view text);

struct SessionEvent {
  std::uint64_t sequence = 0;
  EventKind kind = EventKind::created;
  nlohmann::json payload;
  std::string at;

  friend bool operator==(const SessionEvent&, const SessionEvent&) = default;
};

nlohmann::json to_json(const SessionEvent& event);
SessionEvent event_from_json(const nlohmann::json& j);

// Rebuilds a session from its events. Sequences must run 0, 1, 2, ... and the
// first event must be `created`; violations throw DomainError.
Session replay(std::span<const SessionEvent> events);

// Names of the rules carried by ConflictError.
namespace rules {
inline constexpr const char* kPriorLocked = "prior_locked";
inline constexpr const char* kPriorMissing = "prior_missing";
inline constexpr const char* kPriorNotLocked = "prior_not_locked";
inline constexpr const char* kDuplicateBagId = "duplicate_bag_id";
inline constexpr const char* kBagIdFormat = "bag_id_format";
inline constexpr const char* kBagTotalPositive = "bag_total_positive";
inline constexpr const char* kBagCategories = "bag_categories";
inline constexpr const char* kSessionRevealed = "session_revealed";
inline constexpr const char* kRevealRequiresBags = "reveal_requires_bags";
}  // namespace rules

struct PosteriorView {
  std::string scope;  // "class" or a bag id
  BetaParams prior;
  BetaParams posterior;
  std::uint64_t blue = 0;
  std::uint64_t total = 0;
  PosteriorSummary summary;
  DensityGrid grid;
  std::uint64_t sequence = 0;
};

struct BagLotCheck {
  std::string bag_id;
  std::optional<std::string> lot_code;
  LotCodeResult parsed;
};

struct RevealReport {
  std::vector<std::string> factories;  // profile names, aligned with probs
  FactoryPosterior pooled;
  std::uint64_t blue = 0;
  std::uint64_t total = 0;
  std::vector<BagLotCheck> lot_checks;
  std::uint64_t sequence = 0;
};

struct SessionStoreOptions {
  // Empty: memory only. Otherwise every event is appended (and fsynced) to
  // <data_dir>/<session-id>.events.jsonl, and existing logs are replayed on
  // construction.
  std::filesystem::path data_dir;
  std::vector<FactoryProfile> profiles;
  bool fsync = true;
  // ISO-8601 UTC timestamps by default.
  std::function<std::string()> clock;
  // Random 16-hex-digit ids by default.
  std::function<std::string()> id_generator;
};

// Thread-safe registry of sessions. Writes to one session are serialized;
// different sessions proceed independently. Unknown ids throw NotFoundError;
// rule violations throw ConflictError naming the rule.
class SessionStore {
 public:
  explicit SessionStore(SessionStoreOptions options);
  ~SessionStore();

  SessionStore(const SessionStore&) = delete;
  SessionStore& operator=(const SessionStore&) = delete;

  Session create_session();
  Session get(const std::string& id) const;
  std::vector<std::string> list() const;

  Session set_prior(const std::string& id, const BetaParams& params);
  Session lock_prior(const std::string& id);
  Session add_bag(const std::string& id, BagTally tally);

  // scope is "class" (pool every bag) or one bag id.
  PosteriorView get_posterior(const std::string& id, const std::string& scope,
                              double level = kDefaultCredibleLevel,
                              std::size_t grid_points = 512) const;
  RevealReport reveal(const std::string& id);
  std::string export_csv(const std::string& id) const;
  std::vector<SessionEvent> events(const std::string& id) const;

  const std::vector<FactoryProfile>& profiles() const noexcept {
    return options_.profiles;
  }

 private:
  struct Entry;

  std::shared_ptr<Entry> find(const std::string& id) const;
  void append(Entry& entry, EventKind kind, nlohmann::json payload);
  void load_existing();

  SessionStoreOptions options_;
  mutable std::shared_mutex registry_mutex_;
  std::map<std::string, std::shared_ptr<Entry>> sessions_;
};

}  // namespace mmsbayes
