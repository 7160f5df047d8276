#pragma once

// Feed monitoring: snapshots over time, drift between consecutive snapshots
// and lexicon scans of the content a skill plays.

#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "skillsec/fetch.hpp"
#include "skillsec/lexicon.hpp"
#include "skillsec/model.hpp"

namespace skillsec {

struct ContentDiff {
    std::string old_digest;
    std::string new_digest;
    double drift = 0.0;
    std::vector<FeedItem> added_items;
    std::vector<FeedItem> removed_items;
    std::vector<std::pair<FeedItem, FeedItem>> changed_items;  // (old, new) sharing a title
};

/// Surviving items are the longest order-preserving run of canonically equal
/// (title, body) pairs; drift = 1 - survivors / max(|old|, |new|).
/// Unmatched items with equal titles are reported as changed, the rest as
/// added or removed. Throws LineageError when the sources differ.
ContentDiff diff_snapshots(const FeedSnapshot& old_snap, const FeedSnapshot& new_snap);

enum class Severity : std::uint8_t { Reject, Review };
std::string_view severity_name(Severity s);
Severity severity_of(LexiconKind kind);

struct PolicyFinding {
    std::size_t item_index = 0;
    LexiconKind lexicon = LexiconKind::RudeWords;
    std::string matched_phrase;
    Severity severity = Severity::Review;
    auto operator<=>(const PolicyFinding&) const = default;
};

/// Throws EmptyLexiconError if any of the three lexicons has no entries.
std::vector<PolicyFinding> policy_scan(const FeedSnapshot& snapshot, const Lexicons& lexicons);

/// Fetches and parses a feed.
FeedSnapshot snapshot(const std::string& source, FeedFormat format, std::int64_t taken_at,
                      const FetchOptions& options = {});

/// Append-only directory of canonicalized snapshots:
///   <root>/index.jsonl               one line per stored snapshot
///   <root>/<skill_id>/<taken_at>.json
class SnapshotStore {
public:
    explicit SnapshotStore(std::filesystem::path root);

    const std::filesystem::path& root() const { return root_; }
    /// Throws Error if (skill_id, taken_at) is already stored.
    std::filesystem::path put(const std::string& skill_id, const FeedSnapshot& snap);
    /// Stored snapshots of one skill, oldest first.
    std::vector<FeedSnapshot> history(const std::string& skill_id) const;

private:
    std::filesystem::path root_;
    mutable std::mutex mutex_;
};

struct MonitorEntry {
    std::string skill_id;
    std::string source;
    FeedFormat format = FeedFormat::RSS;
};

struct PollResult {
    std::string skill_id;
    std::optional<FeedSnapshot> snapshot;
    std::optional<ContentDiff> diff;  // against the previous stored snapshot
    std::vector<PolicyFinding> findings;
    bool alert = false;  // drift at or above the alert level, or a Reject finding
    std::string error;   // fetch or parse failure
};

struct SnapshotSummary {
    std::int64_t taken_at = 0;
    std::string digest;
    std::size_t items = 0;
    std::optional<double> drift;  // against the preceding snapshot
};

struct MonitorReport {
    MonitorEntry entry;
    std::vector<SnapshotSummary> snapshots;
    std::vector<PolicyFinding> latest_findings;
    bool alert = false;
};

/// Registry of watched feeds kept in <store>/monitors.json, polled on demand.
class Monitor {
public:
    Monitor(std::filesystem::path store_root, Lexicons lexicons, double alert_level, FetchOptions fetch = {});

    void add(const MonitorEntry& entry);
    std::vector<MonitorEntry> entries() const;

    /// Fetches every registered feed (concurrently), stores the snapshots and
    /// compares each with its predecessor. Results follow skill_id order.
    std::vector<PollResult> poll_once(std::int64_t taken_at);
    /// Throws UnknownSkillError for an unregistered skill.
    MonitorReport report(const std::string& skill_id) const;

private:
    std::filesystem::path registry_path() const;

    SnapshotStore store_;
    Lexicons lexicons_;
    double alert_level_;
    FetchOptions fetch_;
};

}  // namespace skillsec
