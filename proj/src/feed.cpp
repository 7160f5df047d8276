#include "skillsec/feed.hpp"

#include <sstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <nlohmann/json.hpp>

#include "skillsec/errors.hpp"
#include "skillsec/hash.hpp"
#include "skillsec/text.hpp"

namespace skillsec {

namespace {

namespace pt = boost::property_tree;

std::vector<FeedItem> parse_rss(std::string_view body) {
    pt::ptree doc;
    std::istringstream in{std::string(body)};
    try {
        pt::read_xml(in, doc, pt::xml_parser::no_comments);
    } catch (const pt::xml_parser_error& e) {
        throw FormatError(std::string("malformed RSS: ") + e.what());
    }
    const auto rss = doc.get_child_optional("rss");
    if (!rss) throw FormatError("malformed RSS: missing <rss> root");
    const auto channel = rss->get_child_optional("channel");
    if (!channel) throw FormatError("malformed RSS: missing <channel>");

    std::vector<FeedItem> items;
    for (const auto& [tag, node] : *channel) {
        if (tag != "item") continue;
        FeedItem item;
        item.title = node.get<std::string>("title", "");
        item.body = node.get<std::string>("description", "");
        items.push_back(std::move(item));
    }
    return items;
}

std::vector<FeedItem> parse_json_feed(std::string_view body) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(body);
    } catch (const nlohmann::json::parse_error& e) {
        throw FormatError(std::string("malformed JSON feed: ") + e.what());
    }
    if (!doc.is_array()) throw FormatError("malformed JSON feed: top level must be an array");
    std::vector<FeedItem> items;
    for (const auto& entry : doc) {
        if (!entry.is_object()) throw FormatError("malformed JSON feed: items must be objects");
        FeedItem item;
        auto title = entry.find("title");
        auto content = entry.find("body");
        if ((title != entry.end() && !title->is_string()) || (content != entry.end() && !content->is_string())) {
            throw FormatError("malformed JSON feed: title and body must be strings");
        }
        if (title == entry.end() && content == entry.end()) {
            throw FormatError("malformed JSON feed: item has neither title nor body");
        }
        if (title != entry.end()) item.title = title->get<std::string>();
        if (content != entry.end()) item.body = content->get<std::string>();
        items.push_back(std::move(item));
    }
    return items;
}

}  // namespace

FeedItem canonical_item(const FeedItem& item) {
    return FeedItem{text::canonical_whitespace(item.title), text::canonical_whitespace(item.body)};
}

std::string feed_digest(const std::vector<FeedItem>& items) {
    std::string buf;
    for (const auto& raw : items) {
        const auto item = canonical_item(raw);
        buf += item.title;
        buf.push_back('\x1f');
        buf += item.body;
        buf.push_back('\x1e');
    }
    return sha256_hex(buf);
}

FeedSnapshot parse_feed(std::string_view text, FeedFormat format, std::string source, std::int64_t taken_at) {
    FeedSnapshot snap;
    snap.source = std::move(source);
    snap.format = format;
    snap.taken_at = taken_at;
    snap.items = format == FeedFormat::RSS ? parse_rss(text) : parse_json_feed(text);
    if (snap.items.empty()) throw EmptyFeedError("feed contains no items");
    snap.digest = feed_digest(snap.items);
    return snap;
}

}  // namespace skillsec
