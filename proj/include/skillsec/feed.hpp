#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "skillsec/model.hpp"

namespace skillsec {

/// Parses an RSS 2.0 subset (rss/channel/item/{title,description}) or a JSON
/// array of {title, body} objects. Items keep document order.
/// Throws FormatError on malformed input and EmptyFeedError when no item is found.
FeedSnapshot parse_feed(std::string_view text, FeedFormat format, std::string source = {},
                        std::int64_t taken_at = 0);

/// Item with title and body trimmed and inner whitespace collapsed.
FeedItem canonical_item(const FeedItem& item);

/// Digest of an item list: SHA-256 over, for each item in order,
/// canon(title) 0x1F canon(body) 0x1E.
std::string feed_digest(const std::vector<FeedItem>& items);

}  // namespace skillsec
