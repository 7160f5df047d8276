#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <atomic>
#include <thread>

#include <gtest/gtest.h>
#include <httplib.h>

#include "skillsec/content_monitor.hpp"
#include "skillsec/errors.hpp"
#include "skillsec/feed.hpp"
#include "test_support.hpp"

using namespace skillsec;
using skillsec::testing::fixture;
using skillsec::testing::TempDir;

namespace {

// Every fixture feed is read as if it came from one source, the way a
// monitored URL would serve changing content over time.
FeedSnapshot feed(const std::string& name, std::int64_t at = 0) {
    const auto path = fixture("feeds/" + name);
    const auto fmt = path.extension() == ".json" ? FeedFormat::JSONFeed : FeedFormat::RSS;
    return parse_feed(text::read_file(path.string()), fmt, "daily-jokes", at);
}

const std::vector<std::string> kManipulated{"manipulated_ads.rss",       "manipulated_voting.rss",
                                            "manipulated_fake_news.rss", "manipulated_rude.rss",
                                            "manipulated_porn.rss",      "manipulated_political.rss"};

bool has_reject(const std::vector<PolicyFinding>& fs) {
    return std::any_of(fs.begin(), fs.end(), [](const PolicyFinding& f) { return f.severity == Severity::Reject; });
}

}  // namespace

// Drift values recomputed by tests/oracles/feed_digest.py.
TEST(DiffSnapshots, ReferenceDrift) {
    const auto base = feed("jokes.rss");
    EXPECT_DOUBLE_EQ(diff_snapshots(base, feed("jokes.json")).drift, 0.0);
    EXPECT_DOUBLE_EQ(diff_snapshots(base, feed("jokes_one_replaced.rss")).drift, 1.0 / 3.0);
    EXPECT_DOUBLE_EQ(diff_snapshots(base, feed("jokes_reordered.rss")).drift, 1.0 / 3.0);
    for (const auto& m : kManipulated) EXPECT_DOUBLE_EQ(diff_snapshots(base, feed(m)).drift, 1.0) << m;
}

TEST(DiffSnapshots, ItemBreakdown) {
    const auto d = diff_snapshots(feed("jokes.rss"), feed("jokes_one_replaced.rss"));
    EXPECT_TRUE(d.changed_items.empty());
    ASSERT_EQ(d.added_items.size(), 1u);
    ASSERT_EQ(d.removed_items.size(), 1u);
    EXPECT_EQ(d.added_items[0].title, "Calendar");
    EXPECT_EQ(d.removed_items[0].title, "Bicycle");
    EXPECT_NE(d.old_digest, d.new_digest);
}

TEST(DiffSnapshots, SameTitleNewBodyIsChanged) {
    auto a = feed("jokes.rss");
    auto b = a;
    b.items[1].body = "A different punchline.";
    const auto d = diff_snapshots(a, b);
    ASSERT_EQ(d.changed_items.size(), 1u);
    EXPECT_EQ(d.changed_items[0].first.title, a.items[1].title);
    EXPECT_TRUE(d.added_items.empty());
    EXPECT_TRUE(d.removed_items.empty());
}

TEST(DiffSnapshots, Lineage) {
    auto a = feed("jokes.rss");
    auto b = a;
    b.source = "elsewhere";
    EXPECT_THROW(diff_snapshots(a, b), LineageError);
}

TEST(DiffProperty, SelfDriftIsZeroAndBounded) {
    std::vector<FeedSnapshot> all{feed("jokes.rss"), feed("jokes_one_replaced.rss"), feed("jokes_reordered.rss")};
    for (const auto& m : kManipulated) all.push_back(feed(m));
    for (const auto& a : all) {
        EXPECT_EQ(diff_snapshots(a, a).drift, 0.0);
        for (const auto& b : all) {
            const double d = diff_snapshots(a, b).drift;
            EXPECT_GE(d, 0.0);
            EXPECT_LE(d, 1.0);
            EXPECT_DOUBLE_EQ(d, diff_snapshots(b, a).drift);
        }
    }
}

TEST(PolicyScan, CleanFeedHasNoFindings) { EXPECT_TRUE(policy_scan(feed("jokes.rss"), Lexicons::bundled()).empty()); }

TEST(PolicyScan, AdsAreReviewOnly) {
    const auto f = policy_scan(feed("manipulated_ads.rss"), Lexicons::bundled());
    ASSERT_EQ(f.size(), 1u);
    EXPECT_EQ(f[0].severity, Severity::Review);
    EXPECT_EQ(f[0].lexicon, LexiconKind::Advertisement);
    EXPECT_EQ(f[0].matched_phrase, "use promo code");
    EXPECT_EQ(f[0].item_index, 0u);
}

TEST(PolicyScan, PornIsRejected) {
    const auto f = policy_scan(feed("manipulated_porn.rss"), Lexicons::bundled());
    ASSERT_FALSE(f.empty());
    for (const auto& x : f) {
        EXPECT_EQ(x.lexicon, LexiconKind::Pornography);
        EXPECT_EQ(x.severity, Severity::Reject);
    }
}

TEST(PolicyScan, EmptyLexicon) {
    auto lex = Lexicons::bundled();
    lex.advertisement.clear();
    EXPECT_THROW(policy_scan(feed("jokes.rss"), lex), EmptyLexiconError);
}

TEST(PolicyScan, FindingsIndependentOfLexiconOrder) {
    auto lex = Lexicons::bundled();
    auto reversed = lex;
    std::reverse(reversed.rude_words.begin(), reversed.rude_words.end());
    std::reverse(reversed.pornography.begin(), reversed.pornography.end());
    std::reverse(reversed.advertisement.begin(), reversed.advertisement.end());
    for (const auto& m : kManipulated) {
        auto a = policy_scan(feed(m), lex);
        auto b = policy_scan(feed(m), reversed);
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        EXPECT_EQ(a, b) << m;
    }
}

// Lexicon screening catches rude words and pornography; the other four
// manipulations are only visible as drift.
TEST(MonitorSoundness, SixCategories) {
    const auto base = feed("jokes.rss");
    std::set<std::string> rejected;
    for (const auto& m : kManipulated) {
        const auto snap = feed(m);
        EXPECT_GE(diff_snapshots(base, snap).drift, 0.5) << m;
        if (has_reject(policy_scan(snap, Lexicons::bundled()))) rejected.insert(m);
    }
    EXPECT_EQ(rejected, (std::set<std::string>{"manipulated_porn.rss", "manipulated_rude.rss"}));
}

TEST(SnapshotStore, PutAndHistory) {
    TempDir dir("store");
    SnapshotStore store(dir.path());
    store.put("daily-jokes", feed("jokes.rss", 20));
    store.put("daily-jokes", feed("manipulated_rude.rss", 10));
    store.put("other", feed("jokes.rss", 5));
    const auto h = store.history("daily-jokes");
    ASSERT_EQ(h.size(), 2u);
    EXPECT_EQ(h[0].taken_at, 10);
    EXPECT_EQ(h[1].taken_at, 20);
    EXPECT_EQ(h[1].digest, feed("jokes.rss").digest);
    EXPECT_EQ(h[1].items, feed("jokes.rss").items);
    EXPECT_THROW(store.put("daily-jokes", feed("jokes.rss", 20)), Error);
    EXPECT_TRUE(store.history("nobody").empty());
    EXPECT_TRUE(std::filesystem::exists(dir / "index.jsonl"));
}

TEST(Monitor, PollDetectsManipulation) {
    TempDir dir("monitor");
    const auto served = dir / "feed.rss";
    std::filesystem::copy_file(fixture("feeds/jokes.rss"), served);

    Monitor mon(dir / "store", Lexicons::bundled(), 0.5);
    mon.add({"daily-jokes", served.string(), FeedFormat::RSS});
    ASSERT_EQ(mon.entries().size(), 1u);

    auto r1 = mon.poll_once(100);
    ASSERT_EQ(r1.size(), 1u);
    EXPECT_TRUE(r1[0].error.empty());
    EXPECT_FALSE(r1[0].diff);
    EXPECT_FALSE(r1[0].alert);

    std::filesystem::copy_file(fixture("feeds/manipulated_rude.rss"), served,
                               std::filesystem::copy_options::overwrite_existing);
    auto r2 = mon.poll_once(200);
    ASSERT_TRUE(r2[0].diff);
    EXPECT_DOUBLE_EQ(r2[0].diff->drift, 1.0);
    EXPECT_TRUE(r2[0].alert);
    EXPECT_TRUE(has_reject(r2[0].findings));

    const auto rep = mon.report("daily-jokes");
    ASSERT_EQ(rep.snapshots.size(), 2u);
    EXPECT_FALSE(rep.snapshots[0].drift);
    EXPECT_DOUBLE_EQ(*rep.snapshots[1].drift, 1.0);
    EXPECT_TRUE(rep.alert);
    EXPECT_THROW(mon.report("unknown"), UnknownSkillError);
}

TEST(Monitor, FetchFailureIsReportedPerFeed) {
    TempDir dir("monitor-err");
    Monitor mon(dir / "store", Lexicons::bundled(), 0.5);
    mon.add({"gone", (dir / "missing.rss").string(), FeedFormat::RSS});
    mon.add({"ok", fixture("feeds/jokes.rss").string(), FeedFormat::RSS});
    const auto r = mon.poll_once(1);
    ASSERT_EQ(r.size(), 2u);
    EXPECT_EQ(r[0].skill_id, "gone");
    EXPECT_FALSE(r[0].error.empty());
    EXPECT_TRUE(r[1].error.empty());
}

class LocalServer : public ::testing::Test {
protected:
    void SetUp() override {
        body_ = text::read_file(fixture("feeds/jokes.rss").string());
        server_.Get("/feed.rss", [this](const httplib::Request&, httplib::Response& res) {
            res.set_content(body_, "application/rss+xml");
        });
        server_.Get("/slow", [this](const httplib::Request&, httplib::Response& res) {
            ++slow_hits_;
            std::this_thread::sleep_for(std::chrono::milliseconds(600));
            res.set_content(body_, "application/rss+xml");
        });
        server_.Get("/missing", [](const httplib::Request&, httplib::Response& res) { res.status = 404; });
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }
    void TearDown() override {
        server_.stop();
        thread_.join();
    }
    std::string url(const std::string& path) const { return "http://127.0.0.1:" + std::to_string(port_) + path; }

    httplib::Server server_;
    std::thread thread_;
    int port_ = 0;
    std::string body_;
    std::atomic<int> slow_hits_{0};
};

TEST_F(LocalServer, FetchesOverHttp) {
    const auto snap = snapshot(url("/feed.rss"), FeedFormat::RSS, 7);
    EXPECT_EQ(snap.digest, feed("jokes.rss").digest);
    EXPECT_EQ(snap.source, url("/feed.rss"));
    EXPECT_EQ(snap.taken_at, 7);
}

TEST_F(LocalServer, TimeoutRetriesThenFails) {
    FetchOptions opts;
    opts.timeout_ms = 150;
    opts.retries = 2;
    try {
        fetch_bytes(url("/slow"), opts);
        FAIL() << "expected FetchError";
    } catch (const FetchError& e) {
        EXPECT_NE(std::string(e.what()).find("3 attempt"), std::string::npos) << e.what();
    }
    EXPECT_EQ(slow_hits_.load(), 3);
}

TEST_F(LocalServer, ClientErrorIsNotRetried) {
    FetchOptions opts;
    opts.retries = 3;
    try {
        fetch_bytes(url("/missing"), opts);
        FAIL() << "expected FetchError";
    } catch (const FetchError& e) {
        EXPECT_NE(std::string(e.what()).find("HTTP 404"), std::string::npos) << e.what();
        EXPECT_NE(std::string(e.what()).find("1 attempt"), std::string::npos) << e.what();
    }
}

TEST_F(LocalServer, SizeCap) {
    FetchOptions opts;
    opts.size_cap_bytes = 64;
    EXPECT_THROW(fetch_bytes(url("/feed.rss"), opts), SizeCapError);
    EXPECT_THROW(fetch_bytes(fixture("feeds/jokes.rss").string(), opts), SizeCapError);
}

TEST(Fetch, UnreachableHost) {
    FetchOptions opts;
    opts.timeout_ms = 200;
    opts.retries = 0;
    EXPECT_THROW(fetch_bytes("http://127.0.0.1:1/feed.rss", opts), FetchError);
    EXPECT_THROW(fetch_bytes("/definitely/not/here.rss", opts), FetchError);
}

TEST(Fetch, FileUrl) {
    EXPECT_EQ(fetch_bytes("file://" + fixture("feeds/jokes.rss").string()),
              text::read_file(fixture("feeds/jokes.rss").string()));
}
