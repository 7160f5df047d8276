#include "skillsec/analytics.hpp"

#include <algorithm>
#include <set>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

#include "skillsec/errors.hpp"
#include "skillsec/text.hpp"

namespace skillsec {

namespace {

std::string permission_row(const SkillManifest& m) {
    const auto sens = m.requested_sensitive();
    if (sens.size() != 1) return std::to_string(sens.size());
    switch (sens.begin()->kind()) {
        case PermissionKind::Kind::PhoneNumber: return "1 (Phone number)";
        case PermissionKind::Kind::FullName: return "1 (Full name)";
        case PermissionKind::Kind::Email: return "1 (Email)";
        default: return "1 (Address)";
    }
}

const std::vector<std::string>& permission_labels() {
    static const std::vector<std::string> labels{"4",         "3",           "2",           "1 (Phone number)",
                                                 "1 (Full name)", "1 (Email)", "1 (Address)", "0"};
    return labels;
}

struct Bucket {
    std::size_t lo;
    std::size_t hi;  // inclusive
    const char* label;
};

constexpr std::size_t kOpen = static_cast<std::size_t>(-1);

constexpr Bucket kDeveloperBuckets[] = {{1, 1, "1"},         {2, 9, "2 - 9"},       {10, 49, "10 - 49"},
                                        {50, 99, "50 - 99"}, {100, 499, "100 - 499"}, {500, 999, "500 - 999"},
                                        {1000, kOpen, ">= 1000"}};

constexpr Bucket kDescriptionBuckets[] = {
    {0, 49, "< 50"}, {50, 99, "50 - 99"}, {100, 149, "100 - 149"}, {150, 199, "150 - 199"}, {200, kOpen, ">= 200"}};

template <size_t N>
size_t bucket_index(const Bucket (&buckets)[N], size_t v) {
    for (size_t i = 0; i < N; ++i) {
        if (v >= buckets[i].lo && v <= buckets[i].hi) return i;
    }
    return N - 1;
}

std::string dedup_key(const SkillManifest& m) {
    std::vector<std::string> utts;
    for (const auto& i : m.intents) utts.insert(utts.end(), i.utterances.begin(), i.utterances.end());
    std::sort(utts.begin(), utts.end());
    std::string key = m.display_name + '\x1f' + m.invocation_name + '\x1f' + m.developer;
    for (const auto& u : utts) key += '\x1f' + u;
    return key;
}

}  // namespace

std::size_t description_word_count(const std::string& description) {
    return text::split_whitespace(description).size();
}

std::size_t CorpusStats::duplicated_names() const {
    std::size_t n = 0;
    for (const auto& [share, names] : duplication_histogram) {
        if (share >= 2) n += names;
    }
    return n;
}

std::size_t CorpusStats::developers_with_several() const {
    std::size_t n = 0;
    for (const auto& row : developer_table) {
        if (row.label != "1") n += row.count;
    }
    return n;
}

CorpusStats compute_stats(std::span<const SkillManifest> corpus) {
    if (corpus.empty()) throw EmptyCorpusError("corpus has no skills");

    CorpusStats st;
    st.skills = corpus.size();

    std::map<std::string, std::size_t> perm;
    std::unordered_map<std::string, std::size_t> names;
    std::map<std::string, std::size_t> developers;
    std::vector<std::size_t> desc(std::size(kDescriptionBuckets), 0);
    for (const auto& m : corpus) {
        ++perm[permission_row(m)];
        ++names[m.invocation_name];
        ++developers[m.developer];
        ++desc[bucket_index(kDescriptionBuckets, description_word_count(m.description))];
    }

    for (const auto& label : permission_labels()) {
        const auto count = perm.contains(label) ? perm.at(label) : 0;
        st.permission_table.push_back({label, count});
        if (label != "0") st.requesting_sensitive += count;
    }

    for (const auto& [_, share] : names) ++st.duplication_histogram[share];

    std::vector<std::size_t> dev(std::size(kDeveloperBuckets), 0);
    for (const auto& [_, n] : developers) ++dev[bucket_index(kDeveloperBuckets, n)];
    for (size_t i = 0; i < dev.size(); ++i) st.developer_table.push_back({kDeveloperBuckets[i].label, dev[i]});

    std::vector<TableRow> ranked;
    for (const auto& [d, n] : developers) ranked.push_back({d, n});
    std::sort(ranked.begin(), ranked.end(),
              [](const auto& a, const auto& b) { return std::tie(b.count, a.label) < std::tie(a.count, b.label); });
    ranked.resize(std::min<std::size_t>(ranked.size(), 3));
    st.top_developers = std::move(ranked);

    for (size_t i = 0; i < desc.size(); ++i) {
        st.description_length_distribution.push_back(
            {kDescriptionBuckets[i].label, desc[i], 100.0 * static_cast<double>(desc[i]) / static_cast<double>(st.skills)});
    }
    return st;
}

std::vector<SkillManifest> dedup_corpus(std::span<const SkillManifest> raw) {
    std::vector<SkillManifest> out;
    std::unordered_set<std::string> seen;
    for (const auto& m : raw) {
        if (seen.insert(dedup_key(m)).second) out.push_back(m);
    }
    return out;
}

std::vector<WatchEntry> flag_multi_skill_developers(std::span<const SkillManifest> corpus,
                                                    const std::vector<std::string>& seed_skill_ids) {
    std::map<std::string, const SkillManifest*> by_id;
    std::map<std::string, std::size_t> dev_count;
    for (const auto& m : corpus) {
        by_id.emplace(m.skill_id, &m);
        ++dev_count[m.developer];
    }
    std::set<std::string> seeds(seed_skill_ids.begin(), seed_skill_ids.end());
    std::set<std::string> devs;
    for (const auto& id : seeds) {
        auto it = by_id.find(id);
        if (it == by_id.end()) throw UnknownSkillError("seed skill '" + id + "' is not in the corpus");
        devs.insert(it->second->developer);
    }

    std::vector<WatchEntry> out;
    for (const auto& m : corpus) {
        if (devs.contains(m.developer) && !seeds.contains(m.skill_id)) {
            out.push_back({m.developer, dev_count[m.developer], m.skill_id});
        }
    }
    std::stable_sort(out.begin(), out.end(), [](const WatchEntry& a, const WatchEntry& b) {
        return std::tie(b.developer_skill_count, a.developer) < std::tie(a.developer_skill_count, b.developer);
    });
    return out;
}

}  // namespace skillsec
