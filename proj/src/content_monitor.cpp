#include "skillsec/content_monitor.hpp"

#include <algorithm>
#include <fstream>
#include <future>

#include <nlohmann/json.hpp>

#include "skillsec/errors.hpp"
#include "skillsec/feed.hpp"
#include "skillsec/text.hpp"

namespace skillsec {

namespace fs = std::filesystem;
using nlohmann::json;

ContentDiff diff_snapshots(const FeedSnapshot& old_snap, const FeedSnapshot& new_snap) {
    if (old_snap.source != new_snap.source) {
        throw LineageError("snapshots come from different sources: '" + old_snap.source + "' and '" +
                           new_snap.source + "'");
    }
    std::vector<FeedItem> a, b;
    for (const auto& i : old_snap.items) a.push_back(canonical_item(i));
    for (const auto& i : new_snap.items) b.push_back(canonical_item(i));

    ContentDiff d;
    d.old_digest = old_snap.digest.empty() ? feed_digest(a) : old_snap.digest;
    d.new_digest = new_snap.digest.empty() ? feed_digest(b) : new_snap.digest;

    const size_t n = a.size(), m = b.size();
    std::vector<std::vector<size_t>> lcs(n + 1, std::vector<size_t>(m + 1, 0));
    for (size_t i = n; i-- > 0;) {
        for (size_t j = m; j-- > 0;) {
            lcs[i][j] = a[i] == b[j] ? lcs[i + 1][j + 1] + 1 : std::max(lcs[i + 1][j], lcs[i][j + 1]);
        }
    }
    std::vector<bool> kept_a(n, false), kept_b(m, false);
    for (size_t i = 0, j = 0; i < n && j < m;) {
        if (a[i] == b[j]) {
            kept_a[i++] = true;
            kept_b[j++] = true;
        } else if (lcs[i + 1][j] >= lcs[i][j + 1]) {
            ++i;
        } else {
            ++j;
        }
    }

    const size_t longest = std::max(n, m);
    d.drift = longest == 0 ? 0.0 : 1.0 - static_cast<double>(lcs[0][0]) / static_cast<double>(longest);

    std::vector<bool> paired_b(m, false);
    for (size_t i = 0; i < n; ++i) {
        if (kept_a[i]) continue;
        bool paired = false;
        for (size_t j = 0; j < m; ++j) {
            if (!kept_b[j] && !paired_b[j] && b[j].title == a[i].title) {
                d.changed_items.emplace_back(a[i], b[j]);
                paired_b[j] = paired = true;
                break;
            }
        }
        if (!paired) d.removed_items.push_back(a[i]);
    }
    for (size_t j = 0; j < m; ++j) {
        if (!kept_b[j] && !paired_b[j]) d.added_items.push_back(b[j]);
    }
    return d;
}

std::string_view severity_name(Severity s) { return s == Severity::Reject ? "Reject" : "Review"; }

Severity severity_of(LexiconKind kind) {
    return kind == LexiconKind::Advertisement ? Severity::Review : Severity::Reject;
}

std::vector<PolicyFinding> policy_scan(const FeedSnapshot& snapshot, const Lexicons& lexicons) {
    for (auto kind : {LexiconKind::RudeWords, LexiconKind::Pornography, LexiconKind::Advertisement}) {
        if (lexicons.phrases(kind).empty()) {
            throw EmptyLexiconError("lexicon " + std::string(lexicon_name(kind)) + " has no entries");
        }
    }
    std::vector<PolicyFinding> out;
    for (size_t i = 0; i < snapshot.items.size(); ++i) {
        const auto& item = snapshot.items[i];
        for (auto& hit : scan_text(item.title + "\n" + item.body, lexicons)) {
            out.push_back({i, hit.lexicon, std::move(hit.phrase), severity_of(hit.lexicon)});
        }
    }
    return out;
}

FeedSnapshot snapshot(const std::string& source, FeedFormat format, std::int64_t taken_at,
                      const FetchOptions& options) {
    return parse_feed(fetch_bytes(source, options), format, source, taken_at);
}

namespace {

json snapshot_to_json(const FeedSnapshot& s) {
    json items = json::array();
    for (const auto& raw : s.items) {
        const auto i = canonical_item(raw);
        items.push_back({{"title", i.title}, {"body", i.body}});
    }
    return {{"source", s.source},
            {"format", feed_format_name(s.format)},
            {"taken_at", s.taken_at},
            {"digest", s.digest},
            {"items", items}};
}

FeedSnapshot snapshot_from_json(const json& j) {
    FeedSnapshot s;
    s.source = j.at("source").get<std::string>();
    s.format = feed_format_from_name(j.at("format").get<std::string>()).value_or(FeedFormat::RSS);
    s.taken_at = j.at("taken_at").get<std::int64_t>();
    s.digest = j.at("digest").get<std::string>();
    for (const auto& i : j.at("items")) s.items.push_back({i.at("title"), i.at("body")});
    return s;
}

}  // namespace

SnapshotStore::SnapshotStore(fs::path root) : root_(std::move(root)) { fs::create_directories(root_); }

fs::path SnapshotStore::put(const std::string& skill_id, const FeedSnapshot& snap) {
    std::lock_guard lock(mutex_);
    const auto dir = root_ / skill_id;
    fs::create_directories(dir);
    const auto file = dir / (std::to_string(snap.taken_at) + ".json");
    if (fs::exists(file)) {
        throw Error("snapshot of '" + skill_id + "' at " + std::to_string(snap.taken_at) + " already stored");
    }
    text::write_file(file.string(), snapshot_to_json(snap).dump(2) + "\n");
    std::ofstream index(root_ / "index.jsonl", std::ios::app);
    index << json{{"skill_id", skill_id},
                  {"taken_at", snap.taken_at},
                  {"digest", snap.digest},
                  {"file", fs::relative(file, root_).string()}}
                 .dump()
          << '\n';
    return file;
}

std::vector<FeedSnapshot> SnapshotStore::history(const std::string& skill_id) const {
    std::lock_guard lock(mutex_);
    std::vector<FeedSnapshot> out;
    const auto dir = root_ / skill_id;
    if (!fs::exists(dir)) return out;
    for (const auto& e : fs::directory_iterator(dir)) {
        if (e.path().extension() != ".json") continue;
        try {
            out.push_back(snapshot_from_json(json::parse(text::read_file(e.path().string()))));
        } catch (const json::exception& ex) {
            throw FormatError("corrupt snapshot " + e.path().string() + ": " + ex.what());
        }
    }
    std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.taken_at < y.taken_at; });
    return out;
}

Monitor::Monitor(fs::path store_root, Lexicons lexicons, double alert_level, FetchOptions fetch)
    : store_(std::move(store_root)), lexicons_(std::move(lexicons)), alert_level_(alert_level), fetch_(fetch) {}

fs::path Monitor::registry_path() const { return store_.root() / "monitors.json"; }

std::vector<MonitorEntry> Monitor::entries() const {
    std::vector<MonitorEntry> out;
    if (!fs::exists(registry_path())) return out;
    const auto doc = json::parse(text::read_file(registry_path().string()));
    for (const auto& [id, e] : doc.items()) {
        auto fmt = feed_format_from_name(e.at("format").get<std::string>());
        if (!fmt) throw ConfigError("monitors.json: unknown format for '" + id + "'");
        out.push_back({id, e.at("source").get<std::string>(), *fmt});
    }
    return out;
}

void Monitor::add(const MonitorEntry& entry) {
    json doc = json::object();
    if (fs::exists(registry_path())) doc = json::parse(text::read_file(registry_path().string()));
    doc[entry.skill_id] = {{"source", entry.source}, {"format", feed_format_name(entry.format)}};
    text::write_file(registry_path().string(), doc.dump(2) + "\n");
}

std::vector<PollResult> Monitor::poll_once(std::int64_t taken_at) {
    const auto watched = entries();
    std::vector<std::future<FeedSnapshot>> fetches;
    for (const auto& e : watched) {
        fetches.push_back(std::async(std::launch::async, [&, e] { return snapshot(e.source, e.format, taken_at, fetch_); }));
    }

    std::vector<PollResult> results;
    for (size_t i = 0; i < watched.size(); ++i) {
        PollResult r;
        r.skill_id = watched[i].skill_id;
        try {
            auto snap = fetches[i].get();
            const auto previous = store_.history(r.skill_id);
            store_.put(r.skill_id, snap);
            if (!previous.empty() && previous.back().source == snap.source) {
                r.diff = diff_snapshots(previous.back(), snap);
            }
            r.findings = policy_scan(snap, lexicons_);
            r.snapshot = std::move(snap);
        } catch (const Error& ex) {
            r.error = ex.what();
        }
        const bool drifted = r.diff && r.diff->drift >= alert_level_;
        const bool rejected = std::any_of(r.findings.begin(), r.findings.end(),
                                          [](const PolicyFinding& f) { return f.severity == Severity::Reject; });
        r.alert = drifted || rejected;
        results.push_back(std::move(r));
    }
    return results;
}

MonitorReport Monitor::report(const std::string& skill_id) const {
    MonitorReport rep;
    const auto watched = entries();
    auto it = std::find_if(watched.begin(), watched.end(), [&](const auto& e) { return e.skill_id == skill_id; });
    if (it == watched.end()) throw UnknownSkillError("no feed is monitored for '" + skill_id + "'");
    rep.entry = *it;

    const auto hist = store_.history(skill_id);
    for (size_t i = 0; i < hist.size(); ++i) {
        SnapshotSummary s{hist[i].taken_at, hist[i].digest, hist[i].items.size(), std::nullopt};
        if (i > 0 && hist[i - 1].source == hist[i].source) {
            s.drift = diff_snapshots(hist[i - 1], hist[i]).drift;
            rep.alert |= *s.drift >= alert_level_;
        }
        rep.snapshots.push_back(std::move(s));
    }
    if (!hist.empty()) {
        rep.latest_findings = policy_scan(hist.back(), lexicons_);
        rep.alert |= std::any_of(rep.latest_findings.begin(), rep.latest_findings.end(),
                                 [](const PolicyFinding& f) { return f.severity == Severity::Reject; });
    }
    return rep;
}

}  // namespace skillsec
