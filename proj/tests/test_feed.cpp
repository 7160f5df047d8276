#include <gtest/gtest.h>

#include "skillsec/errors.hpp"
#include "skillsec/feed.hpp"
#include "skillsec/hash.hpp"
#include "test_support.hpp"

using namespace skillsec;
using skillsec::testing::fixture;

namespace {

FeedSnapshot load(const std::string& name) {
    const auto path = fixture("feeds/" + name);
    const auto fmt = path.extension() == ".json" ? FeedFormat::JSONFeed : FeedFormat::RSS;
    return parse_feed(text::read_file(path.string()), fmt, path.string());
}

}  // namespace

TEST(Sha256, KnownVectors) {
    EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(ParseFeed, RssItemsInOrder) {
    const auto s = load("jokes.rss");
    ASSERT_EQ(s.items.size(), 3u);
    EXPECT_EQ(s.items[0].title, "Scarecrow");
    EXPECT_EQ(s.items[2].title, "Bicycle");
}

TEST(ParseFeed, JsonAndRssAgree) { EXPECT_EQ(load("jokes.rss").digest, load("jokes.json").digest); }

TEST(ParseFeed, Deterministic) {
    const auto body = text::read_file(fixture("feeds/jokes.rss").string());
    EXPECT_EQ(parse_feed(body, FeedFormat::RSS).digest, parse_feed(body, FeedFormat::RSS).digest);
}

// Digests recomputed by tests/oracles/feed_digest.py.
TEST(ParseFeed, DigestsMatchReferenceScript) {
    const std::vector<std::pair<std::string, std::string>> golden{
        {"jokes.rss", "62d97a41febdb7bc879f3738fa2542d7a3d1750ce1e78f8c13a2d3d735cb73d3"},
        {"jokes_one_replaced.rss", "a83cee9f8df3245578877d7e499c0e61f06ff6b54e50bede195b833741de70c7"},
        {"jokes_reordered.rss", "7682f385560ac5136ebfbf268e70dc836977a6a68a6702674f928f56da8581dc"},
        {"manipulated_ads.rss", "999b573e362832b38141d77829f2c5b199fcdd09b0f9ced3363ab631f746031e"},
        {"manipulated_fake_news.rss", "25288f99120e9f0ab952d74f34d148ea38a089ddc9ce049e8c6849c60e6f216d"},
        {"manipulated_political.rss", "aefc8de28b235123d9e58f560e8ccb0f5cf50649464f311f3436804eb5eab192"},
        {"manipulated_porn.rss", "d6355819acec619705e3dd95d0d4ce915fb2e66dad61ea225ac7f89c11b72a64"},
        {"manipulated_rude.rss", "78c6fb769d3416082b089c3443f84f7217901e7e5f0d2ecff6d53b326fd8dcda"},
        {"manipulated_voting.rss", "7254e9ce910ad767c8aba722e30922c6c1f57c9298d512af19cefd5a4ac7ddc0"},
    };
    for (const auto& [name, digest] : golden) EXPECT_EQ(load(name).digest, digest) << name;
    EXPECT_NE(load("jokes.rss").digest, load("manipulated_ads.rss").digest);
}

TEST(ParseFeed, WhitespaceOnlyEditsKeepDigest) {
    const std::vector<FeedItem> a{{"Title", "one two"}};
    const std::vector<FeedItem> b{{"  Title ", "one \n\t two  "}};
    const std::vector<FeedItem> c{{"title", "one two"}};
    EXPECT_EQ(feed_digest(a), feed_digest(b));
    EXPECT_NE(feed_digest(a), feed_digest(c));
}

TEST(ParseFeed, OrderSensitiveDigest) {
    EXPECT_NE(feed_digest({{"a", "1"}, {"b", "2"}}), feed_digest({{"b", "2"}, {"a", "1"}}));
    // The separator keeps field boundaries apart.
    EXPECT_NE(feed_digest({{"ab", "c"}}), feed_digest({{"a", "bc"}}));
}

TEST(ParseFeed, Errors) {
    EXPECT_THROW(parse_feed("<rss><channel><item>", FeedFormat::RSS), FormatError);
    EXPECT_THROW(parse_feed("[{\"title\": 1", FeedFormat::JSONFeed), FormatError);
    EXPECT_THROW(parse_feed("<rss version=\"2.0\"><channel><title>x</title></channel></rss>", FeedFormat::RSS),
                 EmptyFeedError);
    EXPECT_THROW(parse_feed("[]", FeedFormat::JSONFeed), EmptyFeedError);
    EXPECT_THROW(parse_feed("{\"title\": \"a\"}", FeedFormat::JSONFeed), FormatError);
}
