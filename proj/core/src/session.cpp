#include "mmsbayes/session.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <chrono>
#include <cstring>
#include <ctime>
#include <fstream>
#include <mutex>
#include <random>
#include <sstream>

#include "mmsbayes/error.hpp"

namespace mmsbayes {

namespace {

constexpr std::string_view kLogSuffix = ".events.jsonl";

std::string utc_now() {
  const auto now = std::chrono::system_clock::now();
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      now.time_since_epoch()) %
                  1000;
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%S", &tm);
  char out[48];
  std::snprintf(out, sizeof out, "%s.%03dZ", buf, static_cast<int>(ms.count()));
  return out;
}

std::string random_id() {
  std::random_device device;
  std::uint64_t v = (static_cast<std::uint64_t>(device()) << 32) ^ device();
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

bool bad_text(const std::string& s) {
  return s.find_first_of(",\r\n\"") != std::string::npos;
}

nlohmann::json bag_payload(const BagTally& bag) {
  nlohmann::json j;
  j["bag_id"] = bag.bag_id;
  j["counts"] = bag.counts.counts();
  j["lot_code"] = bag.lot_code ? nlohmann::json(*bag.lot_code) : nlohmann::json();
  return j;
}

BagTally bag_from_payload(const nlohmann::json& j) {
  BagTally bag;
  bag.bag_id = j.at("bag_id").get<std::string>();
  bag.counts = CountVector(j.at("counts").get<std::vector<std::uint64_t>>());
  if (j.contains("lot_code") && !j["lot_code"].is_null()) {
    bag.lot_code = j["lot_code"].get<std::string>();
  }
  return bag;
}

// The single place where session rules are enforced; live operations and
// replay both go through it.
void check_transition(const Session& s, EventKind kind,
                      const nlohmann::json& payload) {
  switch (kind) {
    case EventKind::created:
      throw DomainError("session already created");
    case EventKind::prior_set:
      if (s.prior_locked) {
        throw ConflictError(rules::kPriorLocked,
                            "the prior is locked and can no longer change");
      }
      break;
    case EventKind::prior_locked:
      if (!s.prior) {
        throw ConflictError(rules::kPriorMissing, "no prior has been set");
      }
      if (s.prior_locked) {
        throw ConflictError(rules::kPriorLocked, "the prior is already locked");
      }
      break;
    case EventKind::bag_added: {
      if (s.revealed) {
        throw ConflictError(rules::kSessionRevealed,
                            "the session has been revealed; no more bags");
      }
      if (!s.prior_locked) {
        throw ConflictError(rules::kPriorNotLocked,
                            "lock the prior before adding data");
      }
      const BagTally bag = bag_from_payload(payload);
      if (bag.bag_id.empty() || bad_text(bag.bag_id) ||
          bag.bag_id.find_first_of(" \t") == 0 ||
          bag.bag_id.find_last_of(" \t") == bag.bag_id.size() - 1) {
        throw ConflictError(rules::kBagIdFormat,
                            "bag_id must be non-empty, trimmed, and free of "
                            "commas, quotes and newlines");
      }
      if (bag.lot_code && bad_text(*bag.lot_code)) {
        throw ConflictError(rules::kBagIdFormat,
                            "lot_code must be free of commas, quotes and "
                            "newlines");
      }
      if (bag.counts.size() != kColours.size() && bag.counts.size() != 2) {
        throw ConflictError(rules::kBagCategories,
                            "bags carry six colour counts or (blue, not blue)");
      }
      if (bag.total() == 0) {
        throw ConflictError(rules::kBagTotalPositive,
                            "a bag must contain at least one candy");
      }
      for (const auto& existing : s.bags) {
        if (existing.bag_id == bag.bag_id) {
          throw ConflictError(rules::kDuplicateBagId,
                              "bag '" + bag.bag_id + "' was already submitted");
        }
      }
      break;
    }
    case EventKind::revealed:
      if (s.bags.empty()) {
        throw ConflictError(rules::kRevealRequiresBags,
                            "reveal needs at least one bag");
      }
      break;
  }
}

void apply_event(Session& s, const SessionEvent& e) {
  switch (e.kind) {
    case EventKind::created:
      s.id = e.payload.at("id").get<std::string>();
      s.created_at = e.payload.at("created_at").get<std::string>();
      break;
    case EventKind::prior_set:
      s.prior = BetaParams(e.payload.at("alpha").get<double>(),
                           e.payload.at("beta").get<double>());
      break;
    case EventKind::prior_locked:
      s.prior_locked = true;
      break;
    case EventKind::bag_added:
      s.bags.push_back(bag_from_payload(e.payload));
      break;
    case EventKind::revealed:
      s.revealed = true;
      break;
  }
  s.sequence = e.sequence;
}

void write_line_durably(const std::filesystem::path& path,
                        const std::string& line, bool sync) {
  const int fd = ::open(path.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC,
                        0644);
  if (fd < 0) {
    throw std::runtime_error("cannot open event log '" + path.string() +
                             "': " + std::strerror(errno));
  }
  const char* data = line.data();
  std::size_t left = line.size();
  while (left > 0) {
    const ssize_t n = ::write(fd, data, left);
    if (n < 0) {
      if (errno == EINTR) continue;
      const int err = errno;
      ::close(fd);
      throw std::runtime_error("cannot append to event log '" + path.string() +
                               "': " + std::strerror(err));
    }
    data += n;
    left -= static_cast<std::size_t>(n);
  }
  if (sync && ::fsync(fd) != 0) {
    const int err = errno;
    ::close(fd);
    throw std::runtime_error("fsync failed on '" + path.string() +
                             "': " + std::strerror(err));
  }
  ::close(fd);
}

}  // namespace

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::created: return "created";
    case EventKind::prior_set: return "prior_set";
    case EventKind::prior_locked: return "prior_locked";
    case EventKind::bag_added: return "bag_added";
    case EventKind::revealed: return "revealed";
  }
  return "unknown";
}

EventKind event_kind_from_string(std::string_view text) {
  for (auto k : {EventKind::created, EventKind::prior_set,
                 EventKind::prior_locked, EventKind::bag_added,
                 EventKind::revealed}) {
    if (to_string(k) == text) return k;
  }
  throw DomainError("unknown session event kind '" + std::string(text) + "'");
}

nlohmann::json to_json(const SessionEvent& event) {
  return nlohmann::json{{"sequence", event.sequence},
                        {"kind", to_string(event.kind)},
                        {"payload", event.payload},
                        {"at", event.at}};
}

SessionEvent event_from_json(const nlohmann::json& j) {
  try {
    return SessionEvent{j.at("sequence").get<std::uint64_t>(),
                        event_kind_from_string(j.at("kind").get<std::string>()),
                        j.at("payload"), j.at("at").get<std::string>()};
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("malformed session event: ") + e.what());
  }
}

Session replay(std::span<const SessionEvent> events) {
  if (events.empty() || events.front().kind != EventKind::created) {
    throw DomainError("event log must start with a 'created' event");
  }
  Session s;
  for (std::size_t i = 0; i < events.size(); ++i) {
    const SessionEvent& e = events[i];
    if (e.sequence != i) {
      throw DomainError("event log sequence gap at position " +
                        std::to_string(i));
    }
    if (i > 0) check_transition(s, e.kind, e.payload);
    if (i > 0 && e.kind == EventKind::created) {
      throw DomainError("duplicate 'created' event");
    }
    apply_event(s, e);
  }
  return s;
}

struct SessionStore::Entry {
  mutable std::mutex mutex;
  Session state;
  std::vector<SessionEvent> log;
  std::filesystem::path file;
};

SessionStore::SessionStore(SessionStoreOptions options)
    : options_(std::move(options)) {
  if (!options_.clock) options_.clock = utc_now;
  if (!options_.id_generator) options_.id_generator = random_id;
  if (!options_.data_dir.empty()) {
    std::filesystem::create_directories(options_.data_dir);
    load_existing();
  }
}

SessionStore::~SessionStore() = default;

void SessionStore::load_existing() {
  for (const auto& item :
       std::filesystem::directory_iterator(options_.data_dir)) {
    const std::string name = item.path().filename().string();
    if (!item.is_regular_file() || name.size() <= kLogSuffix.size() ||
        name.compare(name.size() - kLogSuffix.size(), kLogSuffix.size(),
                     kLogSuffix) != 0) {
      continue;
    }
    std::ifstream in(item.path(), std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();

    std::vector<SessionEvent> log;
    std::size_t start = 0;
    while (start < text.size()) {
      const std::size_t nl = text.find('\n', start);
      // A final line without a newline is a torn write; cut it off so the
      // next append starts on a fresh line.
      if (nl == std::string::npos) {
        in.close();
        std::filesystem::resize_file(item.path(), start);
        break;
      }
      const std::string line = text.substr(start, nl - start);
      start = nl + 1;
      if (line.empty()) continue;
      try {
        log.push_back(event_from_json(nlohmann::json::parse(line)));
      } catch (const nlohmann::json::exception& e) {
        throw DomainError("corrupt event log '" + item.path().string() +
                          "': " + e.what());
      }
    }
    if (log.empty()) continue;
    auto entry = std::make_shared<Entry>();
    entry->state = replay(log);
    entry->log = std::move(log);
    entry->file = item.path();
    sessions_.emplace(entry->state.id, std::move(entry));
  }
}

std::shared_ptr<SessionStore::Entry> SessionStore::find(
    const std::string& id) const {
  std::shared_lock lock(registry_mutex_);
  const auto it = sessions_.find(id);
  if (it == sessions_.end()) {
    throw NotFoundError("no session with id '" + id + "'");
  }
  return it->second;
}

void SessionStore::append(Entry& entry, EventKind kind,
                          nlohmann::json payload) {
  SessionEvent event{entry.log.empty() ? 0 : entry.log.back().sequence + 1,
                     kind, std::move(payload), options_.clock()};
  if (!entry.log.empty()) check_transition(entry.state, kind, event.payload);
  if (!entry.file.empty()) {
    write_line_durably(entry.file, to_json(event).dump() + "\n", options_.fsync);
  }
  apply_event(entry.state, event);
  entry.log.push_back(std::move(event));
}

Session SessionStore::create_session() {
  auto entry = std::make_shared<Entry>();
  std::unique_lock registry(registry_mutex_);
  std::string id;
  do {
    id = options_.id_generator();
  } while (id.empty() || sessions_.count(id) != 0);
  if (!options_.data_dir.empty()) {
    entry->file = options_.data_dir / (id + std::string(kLogSuffix));
  }
  std::lock_guard guard(entry->mutex);
  const std::string now = options_.clock();
  append(*entry, EventKind::created, {{"id", id}, {"created_at", now}});
  sessions_.emplace(id, entry);
  return entry->state;
}

Session SessionStore::get(const std::string& id) const {
  auto entry = find(id);
  std::lock_guard guard(entry->mutex);
  return entry->state;
}

std::vector<std::string> SessionStore::list() const {
  std::shared_lock lock(registry_mutex_);
  std::vector<std::string> ids;
  for (const auto& [id, _] : sessions_) ids.push_back(id);
  return ids;
}

Session SessionStore::set_prior(const std::string& id, const BetaParams& params) {
  auto entry = find(id);
  std::lock_guard guard(entry->mutex);
  append(*entry, EventKind::prior_set,
         {{"alpha", params.alpha()}, {"beta", params.beta()}});
  return entry->state;
}

Session SessionStore::lock_prior(const std::string& id) {
  auto entry = find(id);
  std::lock_guard guard(entry->mutex);
  append(*entry, EventKind::prior_locked, nlohmann::json::object());
  return entry->state;
}

Session SessionStore::add_bag(const std::string& id, BagTally tally) {
  auto entry = find(id);
  std::lock_guard guard(entry->mutex);
  append(*entry, EventKind::bag_added, bag_payload(tally));
  return entry->state;
}

PosteriorView SessionStore::get_posterior(const std::string& id,
                                          const std::string& scope,
                                          double level,
                                          std::size_t grid_points) const {
  Session s = get(id);
  if (!s.prior) {
    throw ConflictError(rules::kPriorMissing, "no prior has been set");
  }
  CountVector data = CountVector::zeros(2);
  if (scope == "class") {
    data = pooled_blue(s.bags);
  } else {
    const auto it = std::find_if(s.bags.begin(), s.bags.end(),
                                 [&](const BagTally& b) { return b.bag_id == scope; });
    if (it == s.bags.end()) {
      throw NotFoundError("session '" + id + "' has no bag '" + scope + "'");
    }
    data = blue_split(it->counts);
  }
  const BetaPosterior post = update_beta_binomial(*s.prior, data);
  return PosteriorView{scope,
                       *s.prior,
                       post.params,
                       data[0],
                       data.total(),
                       summarize_beta(post.params, level),
                       density_grid(post.params, grid_points),
                       s.sequence};
}

RevealReport SessionStore::reveal(const std::string& id) {
  auto entry = find(id);
  std::lock_guard guard(entry->mutex);
  if (options_.profiles.size() != 2) {
    throw DomainError("reveal needs exactly two factory profiles configured");
  }
  if (!entry->state.revealed) {
    append(*entry, EventKind::revealed, nlohmann::json::object());
  } else if (entry->state.bags.empty()) {
    throw ConflictError(rules::kRevealRequiresBags,
                        "reveal needs at least one bag");
  }
  const Session& s = entry->state;
  RevealReport report{{}, classify_blue(pooled_blue(s.bags), options_.profiles),
                      0, 0, {}, s.sequence};
  for (const auto& p : options_.profiles) report.factories.push_back(p.name);
  const CountVector pooled = pooled_blue(s.bags);
  report.blue = pooled[0];
  report.total = pooled.total();
  for (const auto& bag : s.bags) {
    report.lot_checks.push_back(BagLotCheck{
        bag.bag_id, bag.lot_code,
        parse_lot_code(bag.lot_code.value_or(""), options_.profiles)});
  }
  return report;
}

std::string SessionStore::export_csv(const std::string& id) const {
  return format_tally_csv(get(id).bags);
}

std::vector<SessionEvent> SessionStore::events(const std::string& id) const {
  auto entry = find(id);
  std::lock_guard guard(entry->mutex);
  return entry->log;
}

}  // namespace mmsbayes
