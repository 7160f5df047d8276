#include "skillsec/corpus_gen.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <random>
#include <set>

#include <fmt/format.h>

#include "skillsec/errors.hpp"
#include "skillsec/schema.hpp"
#include "skillsec/text.hpp"

namespace skillsec {

namespace {

using json = nlohmann::json;
using Kind = PermissionKind::Kind;

// Raw engine output only: the std distributions differ between standard
// libraries and would make a seed produce different corpora.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}
    std::uint64_t next() { return eng_(); }
    std::size_t below(std::size_t n) { return n == 0 ? 0 : static_cast<std::size_t>(eng_() % n); }
    std::size_t between(std::size_t lo, std::size_t hi) { return lo + below(hi - lo + 1); }
    double unit() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
    bool coin(double p) { return unit() < p; }
    template <class T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
    }
    template <class T>
    const T& pick(const std::vector<T>& v) {
        return v[below(v.size())];
    }

private:
    std::mt19937_64 eng_;
};

const std::vector<std::string> kAdjectives{
    "amazing", "bright",  "calm",   "clever",  "cosmic",  "daily",   "easy",    "epic",    "fancy",  "fast",
    "friendly", "funny",  "gentle", "golden",  "grand",   "happy",   "hidden",  "honest",  "jolly",  "kind",
    "lucky",   "magic",   "mighty", "modern",  "morning", "native",  "neat",    "noble",   "ocean",  "perfect",
    "quick",   "quiet",   "rapid",  "royal",   "silly",   "simple",  "smart",   "solar",   "speedy", "steady",
    "sunny",   "super",   "sweet",  "swift",   "tiny",    "total",   "urban",   "vivid",   "wild",   "wise",
    "young",   "zesty",   "little", "secret",  "classic", "local",   "weekly",  "instant", "green",  "purple"};
const std::vector<std::string> kNouns{
    "facts",   "trivia",   "quiz",    "stories", "jokes",   "recipes", "news",    "tips",     "riddles", "sounds",
    "music",   "radio",    "weather", "garden",  "kitchen", "planet",  "ocean",   "animals",  "birds",   "cats",
    "dogs",    "horses",   "history", "science", "math",    "words",   "spelling", "poems",   "quotes",  "prayers",
    "sports",  "scores",   "travel",  "maps",    "cities",  "trains",  "flights", "movies",   "games",   "puzzles",
    "dice",    "cards",    "timer",   "alarm",   "coach",   "yoga",    "sleep",   "meditation", "health", "fitness",
    "budget",  "stocks",   "coffee",  "tea",     "wine",    "cooking", "baking",  "camping",  "fishing", "hiking",
    "guitar",  "piano",    "drums",   "colors",  "shapes",  "numbers", "letters", "dinosaurs", "robots", "rockets",
    "moon",    "stars",    "volcano", "forest",  "desert",  "river",   "island",  "castle",   "pirates", "dragons"};
const std::vector<std::string> kTails{"guide", "helper", "buddy", "daily", "pro",    "club",   "zone",   "world",
                                      "hub",   "box",    "time",  "now",   "live",   "lab",    "corner", "spot",
                                      "talk",  "show",   "point", "base",  "online", "master", "planet", "place"};
const std::vector<std::string> kVocabulary{
    "this",  "skill", "helps", "you",  "learn",  "about", "the",    "world", "with",    "fun",   "daily",
    "facts", "ask",   "alexa", "for",  "a",      "new",   "story",  "every", "morning", "and",   "evening",
    "enjoy", "easy",  "voice", "tips", "family", "kids",  "simple", "quick", "answers", "your",  "favorite",
    "topic", "is",    "just",  "one",  "of",     "many",  "things", "we",    "offer",   "today", "listen",
    "music", "news",  "games", "play", "more",   "time",  "great",  "help",  "home",    "best"};
const std::vector<std::string> kOtherPermissions{"lists_read", "reminders", "notifications", "amazon_pay",
                                                 "timers", "skill_personalization"};

struct IntentTemplate {
    std::string name;
    std::vector<std::string> utterances;
};
const std::vector<IntentTemplate> kIntentPool{
    {"FactIntent", {"tell me a fact", "give me a fact"}},
    {"QuizIntent", {"start a quiz", "quiz me"}},
    {"NewsIntent", {"what is new", "latest news"}},
    {"RandomIntent", {"surprise me"}},
    {"ScoreIntent", {"what is my score"}},
    {"NextIntent", {"next", "another one"}},
    {"RepeatIntent", {"repeat that", "say that again"}},
    {"StoryIntent", {"tell me a story"}}};

std::string title_case(const std::string& s) {
    std::string out = s;
    bool start = true;
    for (auto& c : out) {
        if (start && c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
        start = c == ' ';
    }
    return out;
}

// A labeled skill that mirrors one the survey names, or a generic labeled
// skill that needs a particular category or developer.
struct Replica {
    std::string row;
    Verdict verdict;
    std::string invocation;  // empty: generic name
    PermissionSet kinds;     // empty: row default
    PermissionSet used;      // LegitimateOverUsed only
    std::vector<std::string> categories;
    std::string developer;   // empty: assigned later
};

const PermissionKind kName = PermissionKind::full_name();
const PermissionKind kAddress = PermissionKind::address();
const PermissionKind kPhone = PermissionKind::phone_number();
const PermissionKind kEmail = PermissionKind::email();

constexpr std::string_view kAdDeveloper = "Blutag";

std::vector<Replica> replicas() {
    std::vector<Replica> r;
    const std::string dev{kAdDeveloper};
    r.push_back({"4", Verdict::OverPrivileged, "blutag deals", {}, {}, {"Shopping"}, dev});
    r.push_back({"4", Verdict::PotentiallyOverPrivileged, "liquor emporium", {}, {}, {"Shopping"}, dev});
    for (const char* n : {"shoe outlet coupons", "grocery saver", "pet supply deals"}) {
        r.push_back({"4", Verdict::PotentiallyOverPrivileged, n, {}, {}, {"Shopping"}, dev});
    }
    for (const char* n : {"beauty bargains", "toy store coupons", "garden center deals", "sports gear savings",
                          "home goods coupons"}) {
        r.push_back({"2", Verdict::PotentiallyOverPrivileged, n, {}, {}, {"Shopping"}, dev});
    }
    r.push_back({"2", Verdict::PotentiallyOverPrivileged, "pizza coupon finder", {}, {}, {"Food"}, ""});
    r.push_back({"1 (Email)", Verdict::PotentiallyOverPrivileged, "deal alerts", {}, {}, {"Shopping"}, ""});

    r.push_back({"3", Verdict::OverPrivileged, "thingee tech talk", {kName, kPhone, kEmail}, {}, {"News"}, ""});
    r.push_back({"3", Verdict::LegitimateOverUsed, "daddy saturday", {kName, kAddress, kEmail}, {kAddress},
                 {"Life style"}, ""});
    r.push_back({"3", Verdict::LegitimateOverUsed, "susu state quiz", {kName, kAddress, kEmail}, {kAddress},
                 {"Game"}, ""});
    r.push_back({"3", Verdict::LegitimateOverUsed, "aawaz biggest fan", {kName, kEmail, kPhone}, {kPhone}, {"Game"},
                 "Aawaz"});
    r.push_back({"3", Verdict::LegitimateOverUsed, "aawaz fan club", {kName, kEmail, kPhone}, {kPhone}, {"Game"},
                 "Aawaz"});
    r.push_back({"2", Verdict::LegitimateOverUsed, "kig", {kName, kEmail}, {kEmail}, {"Game"}, ""});

    r.push_back({"2", Verdict::OverPrivileged, "diginomica podcast", {kAddress, kName}, {}, {"News"}, ""});
    r.push_back({"1 (Address)", Verdict::OverPrivileged, "western drought tracker", {}, {}, {"Weather"}, ""});
    r.push_back({"1 (Address)", Verdict::OverPrivileged, "western states", {}, {}, {"Sport", "News"}, ""});
    for (int i = 0; i < 9; ++i) r.push_back({"1 (Address)", Verdict::OverPrivileged, "", {}, {}, {"Education"}, ""});
    const std::vector<std::vector<std::string>> pairs{{"News", "Weather"},  {"Travel", "Weather"},
                                                      {"Food", "Health"},   {"Sport", "Health"},
                                                      {"Life style", "Health"}, {"Business", "News"},
                                                      {"Travel", "Life style"}};
    for (const auto& p : pairs) r.push_back({"1 (Address)", Verdict::OverPrivileged, "", {}, {}, p, ""});
    return r;
}

struct Draft {
    SkillManifest manifest;
    std::optional<BackendSpec> backend;
    std::optional<Verdict> label;
    PermissionSet used;  // fields a LegitimateOverUsed skill actually speaks
};

const char* field_intent(const PermissionKind& k) {
    switch (k.kind()) {
        case Kind::FullName: return "NameIntent";
        case Kind::Address: return "AddressIntent";
        case Kind::PhoneNumber: return "PhoneIntent";
        default: return "EmailIntent";
    }
}

std::vector<std::string> field_utterances(const PermissionKind& k) {
    switch (k.kind()) {
        case Kind::FullName: return {"what is my name", "say my name"};
        case Kind::Address: return {"what is my address", "where do i live"};
        case Kind::PhoneNumber: return {"what is my phone number"};
        default: return {"what is my email"};
    }
}

std::string field_template(const PermissionKind& k) {
    switch (k.kind()) {
        case Kind::FullName: return "Your name is {name}.";
        case Kind::Address: return "Here is the forecast for {address}.";
        case Kind::PhoneNumber: return "We will text your updates to {phone}.";
        default: return "We will send your summary to {email}.";
    }
}

// Intents and handlers for a labeled skill whose planted verdict is `v`.
void build_labeled(Draft& d, Verdict v, const PermissionSet& used, Rng& rng) {
    auto& m = d.manifest;
    BackendSpec b;
    b.version = 1;
    b.welcome_message = "Welcome to " + m.display_name + ".";
    const auto sens = m.requested_sensitive();

    auto add = [&](const std::string& intent, std::vector<std::string> utts, HandlerRule rule) {
        m.intents.push_back({intent, std::move(utts), {}});
        rule.intent_name = intent;
        b.handlers.push_back(std::move(rule));
    };

    HandlerRule main;
    main.response_template = "Here is something new from " + m.display_name + ".";
    if (v == Verdict::OverPrivileged && rng.coin(0.5)) main.exfiltrate = sens;
    add("MainIntent", {"start", "begin"}, main);

    switch (v) {
        case Verdict::Compliant:
        case Verdict::LegitimateOverUsed: {
            const PermissionSet& shown = v == Verdict::Compliant ? sens : used;
            for (const auto& k : shown) {
                if (k == kName && rng.coin(0.5)) {
                    b.welcome_message = "Welcome back, {name}.";
                    continue;
                }
                HandlerRule r;
                r.response_template = field_template(k);
                add(field_intent(k), field_utterances(k), r);
            }
            break;
        }
        case Verdict::PotentiallyOverPrivileged: {
            PermissionKind target = *sens.begin();
            if (sens.contains(kPhone)) target = kPhone;
            else if (sens.contains(kEmail)) target = kEmail;
            HandlerRule r;
            r.response_template = "Here is your coupon. We sent it to {" + std::string(target.placeholder()) + "}.";
            r.gate = "coupons_available";
            r.gated_response = "We don't have coupons at the moment.";
            add("CouponIntent", {"any coupons", "get a coupon"}, r);
            break;
        }
        case Verdict::OverPrivileged: break;
    }

    HandlerRule help;
    help.response_template = "You can say start to hear from " + m.display_name + ".";
    add("HelpIntent", {"help", "what can you do"}, help);

    b.endpoint_ref = m.endpoint_ref;
    d.backend = std::move(b);
    d.label = v;
}

void build_generic_intents(SkillManifest& m, Rng& rng) {
    std::vector<size_t> idx(kIntentPool.size());
    std::iota(idx.begin(), idx.end(), 0);
    rng.shuffle(idx);
    const auto n = rng.between(1, 3);
    for (size_t i = 0; i < n; ++i) {
        const auto& t = kIntentPool[idx[i]];
        m.intents.push_back({t.name, t.utterances, {}});
    }
}

std::string make_description(std::size_t words, Rng& rng) {
    std::vector<std::string> out;
    out.reserve(words);
    for (size_t i = 0; i < words; ++i) out.push_back(rng.pick(kVocabulary));
    return text::join(out, " ");
}

struct BucketRange {
    std::size_t lo, hi;
};
constexpr BucketRange kDescriptionRanges[] = {{5, 49}, {50, 99}, {100, 149}, {150, 199}, {200, 300}};
constexpr BucketRange kDeveloperRanges[] = {{1, 1}, {2, 9}, {10, 49}, {50, 99}, {100, 499}, {500, 999},
                                            {1000, static_cast<std::size_t>(-1)}};
constexpr const char* kDeveloperLabels[] = {"1", "2 - 9", "10 - 49", "50 - 99", "100 - 499", "500 - 999", ">= 1000"};

std::size_t developer_bucket(std::size_t n) {
    for (size_t i = 0; i < std::size(kDeveloperRanges); ++i) {
        if (n >= kDeveloperRanges[i].lo && n <= kDeveloperRanges[i].hi) return i;
    }
    return std::size(kDeveloperRanges) - 1;
}

const std::vector<std::string>& permission_row_labels() {
    static const std::vector<std::string> labels{"4",         "3",           "2",           "1 (Phone number)",
                                                 "1 (Full name)", "1 (Email)", "1 (Address)", "0"};
    return labels;
}

PermissionSet pick_kinds(std::size_t width, Rng& rng) {
    std::vector<PermissionKind> all(sensitive_kinds().begin(), sensitive_kinds().end());
    rng.shuffle(all);
    return PermissionSet(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(width));
}

}  // namespace

std::vector<std::size_t> apportion(const std::vector<double>& percentages, std::size_t total) {
    std::vector<std::size_t> counts(percentages.size(), 0);
    std::vector<std::pair<double, size_t>> rema;
    std::size_t used = 0;
    for (size_t i = 0; i < percentages.size(); ++i) {
        const double exact = percentages[i] / 100.0 * static_cast<double>(total);
        counts[i] = static_cast<std::size_t>(exact);
        used += counts[i];
        rema.push_back({exact - static_cast<double>(counts[i]), i});
    }
    std::stable_sort(rema.begin(), rema.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    for (size_t k = 0; used < total && k < rema.size(); ++k, ++used) ++counts[rema[k].second];
    return counts;
}

CorpusPlan CorpusPlan::survey() {
    CorpusPlan p;
    const PermissionSet none;
    p.permission_rows = {
        {"4", 4, none, 16, 1, 4, 0},
        {"3", 3, none, 23, 1, 0, 4},
        {"2", 2, none, 41, 6, 6, 1},
        {"1 (Phone number)", 1, {kPhone}, 4, 0, 0, 0},
        {"1 (Full name)", 1, {kName}, 3, 0, 0, 0},
        {"1 (Email)", 1, {kEmail}, 32, 2, 1, 0},
        {"1 (Address)", 1, {kAddress}, 219, 47, 0, 0},
    };
    p.shared_names = {{2, 822}, {3, 150}, {4, 90},  {5, 55},  {6, 35},  {7, 22},  {8, 15},  {9, 13},
                      {10, 10}, {11, 10}, {12, 8},  {13, 6},  {14, 5},  {15, 4},  {16, 3},  {17, 2},
                      {18, 2},  {19, 1},  {20, 1},  {21, 1},  {22, 1},  {24, 1},  {27, 1},  {35, 1},
                      {41, 1}};
    p.named_shared_names = {{"space facts", 41}, {"whose turn", 35}};
    p.developer_buckets = {{2, 9, 3548}, {10, 49, 183}, {50, 99, 16}, {100, 499, 12}, {500, 999, 2}, {1000, 1999, 1}};
    p.named_developers = {{"InfoByVoice", 1625}, {"Patch.com", 902}, {"Rhall", 624}};
    p.description_percentages = {54.4, 26.8, 7.8, 4.1, 6.9};
    p.category_weights = {{"Weather", 750},    {"Communication", 387}, {"Education", 4972}, {"Food", 1167},
                          {"Health", 1703},    {"Home service", 215},  {"Kids", 2221},      {"Life style", 5241},
                          {"News", 5728},      {"Novelty", 2562},      {"Shopping", 246},   {"Social", 861},
                          {"Sport", 1285},     {"Movie", 670},         {"Smart home", 1271}, {"Game", 4866},
                          {"Utility", 211},    {"Music", 548},         {"Business", 1354},  {"Travel", 1092}};
    return p;
}

CorpusPlan CorpusPlan::from_json(const json& doc) {
    auto p = survey();
    if (!doc.is_object()) throw ConfigError("corpus plan must be a JSON object");
    try {
        for (const auto& [key, v] : doc.items()) {
            if (key == "seed") p.seed = v.get<std::uint64_t>();
            else if (key == "unique_skills") p.unique_skills = v.get<std::size_t>();
            else if (key == "raw_skills") p.raw_skills = v.get<std::size_t>();
            else if (key == "permission_rows") {
                p.permission_rows.clear();
                for (const auto& r : v) {
                    PermissionRowPlan row;
                    row.label = r.at("label").get<std::string>();
                    row.width = r.at("width").get<std::size_t>();
                    for (const auto& k : r.value("kinds", json::array())) {
                        auto pk = PermissionKind::from_name(k.get<std::string>());
                        if (!pk || !pk->sensitive()) throw ConfigError("bad permission kind in plan row " + row.label);
                        row.kinds.insert(*pk);
                    }
                    row.total = r.at("total").get<std::size_t>();
                    row.over_privileged = r.value("over_privileged", 0u);
                    row.potentially_over_privileged = r.value("potentially_over_privileged", 0u);
                    row.legitimate_over_used = r.value("legitimate_over_used", 0u);
                    p.permission_rows.push_back(std::move(row));
                }
            } else if (key == "shared_names") {
                p.shared_names.clear();
                for (const auto& [share, n] : v.items()) p.shared_names[std::stoul(share)] = n.get<std::size_t>();
            } else if (key == "named_shared_names") {
                p.named_shared_names = v.get<std::vector<std::pair<std::string, std::size_t>>>();
            } else if (key == "developer_buckets") {
                p.developer_buckets.clear();
                for (const auto& b : v) {
                    p.developer_buckets.push_back({b.at("lo"), b.at("hi"), b.at("developers")});
                }
            } else if (key == "named_developers") {
                p.named_developers = v.get<std::vector<std::pair<std::string, std::size_t>>>();
            } else if (key == "description_percentages") {
                p.description_percentages = v.get<std::vector<double>>();
            } else if (key == "category_weights") {
                p.category_weights = v.get<std::vector<std::pair<std::string, double>>>();
            } else {
                throw ConfigError("unknown corpus plan key '" + key + "'");
            }
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("corpus plan: ") + e.what());
    } catch (const std::logic_error& e) {
        throw ConfigError(std::string("corpus plan: ") + e.what());
    }
    return p;
}

GeneratedCorpus generate_corpus(const CorpusPlan& plan) {
    Rng rng(plan.seed);
    const std::size_t U = plan.unique_skills;
    if (U == 0) throw ConfigError("corpus plan has no skills");
    if (plan.raw_skills < U) throw ConfigError("raw_skills must be at least unique_skills");
    if (plan.description_percentages.size() != std::size(kDescriptionRanges)) {
        throw ConfigError("description_percentages needs one value per length bucket");
    }

    // Labeled skills, row by row.
    std::vector<Draft> drafts;
    std::set<std::string> reserved_names;
    auto reps = replicas();
    std::vector<bool> rep_used(reps.size(), false);
    std::map<std::string, std::vector<size_t>> developer_slots;  // fixed developers -> draft index
    std::optional<size_t> watch_seed_draft;
    std::size_t labeled = 0;

    for (const auto& row : plan.permission_rows) {
        if (std::find(permission_row_labels().begin(), permission_row_labels().end(), row.label) ==
                permission_row_labels().end() || row.label == "0") {
            throw ConfigError("unknown permission row '" + row.label + "'");
        }
        if (row.over_privileged + row.potentially_over_privileged + row.legitimate_over_used > row.total) {
            throw ConfigError("row " + row.label + " plants more verdicts than it has skills");
        }
        if (row.legitimate_over_used > 0 && row.width < 2) {
            throw ConfigError("row " + row.label + ": over-used skills need at least two permissions");
        }
        std::vector<Verdict> verdicts;
        verdicts.insert(verdicts.end(), row.over_privileged, Verdict::OverPrivileged);
        verdicts.insert(verdicts.end(), row.potentially_over_privileged, Verdict::PotentiallyOverPrivileged);
        verdicts.insert(verdicts.end(), row.legitimate_over_used, Verdict::LegitimateOverUsed);
        verdicts.insert(verdicts.end(), row.total - verdicts.size(), Verdict::Compliant);

        for (auto v : verdicts) {
            Draft d;
            auto& m = d.manifest;
            const Replica* rep = nullptr;
            for (size_t i = 0; i < reps.size(); ++i) {
                if (!rep_used[i] && reps[i].row == row.label && reps[i].verdict == v) {
                    rep_used[i] = true;
                    rep = &reps[i];
                    break;
                }
            }
            PermissionSet kinds = !row.kinds.empty() ? row.kinds : pick_kinds(row.width, rng);
            if (rep && !rep->kinds.empty() && rep->kinds.size() == row.width) kinds = rep->kinds;
            m.requested_permissions = kinds;
            if (rng.coin(0.05)) m.requested_permissions.insert(PermissionKind::other(rng.pick(kOtherPermissions)));
            if (rep && !rep->invocation.empty()) {
                m.invocation_name = rep->invocation;
                reserved_names.insert(rep->invocation);
            }
            if (rep) m.categories = rep->categories;
            PermissionSet used;
            if (v == Verdict::LegitimateOverUsed) {
                if (rep && !rep->used.empty() && std::includes(kinds.begin(), kinds.end(), rep->used.begin(),
                                                                rep->used.end())) {
                    used = rep->used;
                } else {
                    // A non-empty proper subset.
                    std::vector<PermissionKind> ks(kinds.begin(), kinds.end());
                    rng.shuffle(ks);
                    used.insert(ks.begin(), ks.begin() + static_cast<std::ptrdiff_t>(rng.between(1, ks.size() - 1)));
                }
            }
            if (rep && !rep->developer.empty()) {
                m.developer = rep->developer;
                developer_slots[rep->developer].push_back(drafts.size());
                if (rep->developer == kAdDeveloper && v == Verdict::OverPrivileged) {
                    watch_seed_draft = drafts.size();
                }
            }
            d.label = v;
            d.used = std::move(used);
            drafts.push_back(std::move(d));
            ++labeled;
        }
    }
    if (labeled > U) throw ConfigError("plan labels more skills than the corpus holds");

    // Unlabeled skills carry no sensitive permission.
    drafts.resize(U);

    // Invocation names.
    std::vector<std::pair<std::string, std::size_t>> groups;
    std::set<std::string> taken = reserved_names;
    auto shared = plan.shared_names;
    for (const auto& [name, share] : plan.named_shared_names) {
        auto it = shared.find(share);
        if (it == shared.end() || it->second == 0) throw ConfigError("named share " + name + " is not in the histogram");
        --it->second;
        groups.push_back({name, share});
        taken.insert(name);
    }
    std::vector<std::string> pair_names;
    for (const auto& a : kAdjectives) {
        for (const auto& n : kNouns) {
            if (!taken.contains(a + " " + n)) pair_names.push_back(a + " " + n);
        }
    }
    rng.shuffle(pair_names);
    size_t next_pair = 0;
    for (const auto& [share, count] : shared) {
        for (size_t i = 0; i < count; ++i) {
            if (next_pair >= pair_names.size()) throw ConfigError("not enough shared names in the word lists");
            groups.push_back({pair_names[next_pair++], share});
        }
    }
    std::size_t members = 0;
    for (const auto& g : groups) members += g.second;
    if (members > U - labeled) throw ConfigError("shared names need more skills than the unlabeled corpus holds");

    std::vector<size_t> unlabeled(U - labeled);
    std::iota(unlabeled.begin(), unlabeled.end(), labeled);
    rng.shuffle(unlabeled);
    size_t cursor = 0;
    for (const auto& [name, share] : groups) {
        for (size_t k = 0; k < share; ++k) {
            auto& m = drafts[unlabeled[cursor++]].manifest;
            m.invocation_name = name;
            m.display_name = title_case(name) + (k == 0 ? "" : " " + std::to_string(k + 1));
        }
    }
    // Everything else gets a name of its own.
    std::vector<std::string> solo_names;
    const std::size_t solo_needed = U - members;
    {
        std::set<std::string> seen;
        while (solo_names.size() < solo_needed) {
            auto name = rng.pick(kAdjectives) + " " + rng.pick(kNouns) + " " + rng.pick(kTails);
            if (kAdjectives.size() * kNouns.size() * kTails.size() < solo_needed * 2) {
                throw ConfigError("corpus too large for the name word lists");
            }
            if (!taken.contains(name) && seen.insert(name).second) solo_names.push_back(std::move(name));
        }
    }
    size_t next_solo = 0;
    for (auto& d : drafts) {
        auto& m = d.manifest;
        if (m.invocation_name.empty()) m.invocation_name = solo_names[next_solo++];
        if (m.display_name.empty()) m.display_name = title_case(m.invocation_name);
    }

    // Developers.
    std::vector<std::pair<std::string, std::size_t>> devs;  // name -> skills
    std::vector<std::size_t> bucket_need(std::size(kDeveloperRanges), 0);
    std::map<size_t, size_t> plan_bucket;  // developer range index -> planned developers
    for (const auto& b : plan.developer_buckets) {
        const auto idx = developer_bucket(b.lo);
        if (idx == 0) throw ConfigError("developer buckets start at 2 skills");
        plan_bucket[idx] += b.developers;
    }
    auto claim = [&](const std::string& name, std::size_t n) {
        const auto idx = developer_bucket(n);
        if (idx > 0) {
            if (plan_bucket[idx] == 0) throw ConfigError("developer " + name + " does not fit the developer buckets");
            --plan_bucket[idx];
        }
        devs.push_back({name, n});
    };
    for (const auto& [name, slots] : developer_slots) claim(name, slots.size());
    for (const auto& [name, n] : plan.named_developers) claim(name, n);
    for (const auto& b : plan.developer_buckets) {
        const auto idx = developer_bucket(b.lo);
        const auto hi = std::min(b.hi, kDeveloperRanges[idx].hi);
        const auto lo = std::max(b.lo, kDeveloperRanges[idx].lo);
        for (; plan_bucket[idx] > 0; --plan_bucket[idx]) {
            // Skewed towards the small end of the bucket, as store listings are.
            const double u = rng.unit();
            const auto n = lo + static_cast<std::size_t>(static_cast<double>(hi - lo + 1) * u * u * u);
            devs.push_back({fmt::format("developer {:05d}", devs.size()), std::min(n, hi)});
        }
    }
    std::size_t fixed_total = 0, assigned_total = 0;
    for (const auto& [name, slots] : developer_slots) fixed_total += slots.size();
    for (const auto& d : devs) assigned_total += d.second;
    if (assigned_total > U) throw ConfigError("developer buckets need more skills than the corpus holds");
    const std::size_t singles = U - assigned_total;
    for (size_t i = 0; i < singles; ++i) devs.push_back({fmt::format("developer {:05d}", devs.size()), 1});

    std::vector<std::string> dev_tokens;
    dev_tokens.reserve(U - fixed_total);
    for (const auto& [name, n] : devs) {
        if (developer_slots.contains(name)) continue;
        dev_tokens.insert(dev_tokens.end(), n, name);
    }
    rng.shuffle(dev_tokens);
    size_t next_dev = 0;
    for (auto& d : drafts) {
        if (d.manifest.developer.empty()) d.manifest.developer = dev_tokens[next_dev++];
    }

    // Descriptions.
    const auto desc_counts = apportion(plan.description_percentages, U);
    std::vector<size_t> desc_bucket;
    for (size_t i = 0; i < desc_counts.size(); ++i) desc_bucket.insert(desc_bucket.end(), desc_counts[i], i);
    rng.shuffle(desc_bucket);

    // Categories.
    double weight_sum = 0.0;
    for (const auto& [c, w] : plan.category_weights) {
        if (!canonical_category(c)) throw ConfigError("unknown category '" + c + "' in corpus plan");
        weight_sum += w;
    }
    auto sample_category = [&]() {
        double x = rng.unit() * weight_sum;
        for (const auto& [c, w] : plan.category_weights) {
            if (x < w) return *canonical_category(c);
            x -= w;
        }
        return *canonical_category(plan.category_weights.back().first);
    };

    for (size_t i = 0; i < U; ++i) {
        auto& d = drafts[i];
        auto& m = d.manifest;
        const auto r = kDescriptionRanges[desc_bucket[i]];
        m.description = make_description(rng.between(r.lo, r.hi), rng);
        if (m.categories.empty()) {
            m.categories.push_back(sample_category());
            if (!d.label && rng.coin(0.02)) {
                auto second = sample_category();
                if (second != m.categories.front()) m.categories.push_back(second);
            }
        }
        m.rating = static_cast<double>(rng.between(0, 50)) / 10.0;
        m.rating_count = m.rating == 0.0 ? 0 : static_cast<std::int64_t>(rng.between(1, 2000));
        m.popularity = static_cast<std::int64_t>(rng.between(0, 100000));
        if (!d.label && rng.coin(0.03)) m.requested_permissions.insert(PermissionKind::other(rng.pick(kOtherPermissions)));
    }

    // Listing order and identifiers.
    std::vector<size_t> order(U);
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);
    std::vector<std::string> id_of(U);
    for (size_t pos = 0; pos < U; ++pos) id_of[order[pos]] = fmt::format("skill-{:05d}", pos + 1);

    GeneratedCorpus out;
    for (size_t i = 0; i < U; ++i) {
        auto& d = drafts[i];
        auto& m = d.manifest;
        m.skill_id = id_of[i];
        m.endpoint_ref = "ep-" + m.skill_id;
        if (d.label) {
            build_labeled(d, *d.label, d.used, rng);
        } else {
            build_generic_intents(m, rng);
        }
    }

    // Planted duplicates: fresh ids, identical on every dedup field.
    const std::size_t dup_count = plan.raw_skills - U;
    std::vector<size_t> dup_of;
    {
        std::vector<size_t> pool(U - labeled);
        std::iota(pool.begin(), pool.end(), labeled);
        rng.shuffle(pool);
        for (size_t j = 0; j < dup_count; ++j) dup_of.push_back(pool[j % pool.size()]);
    }
    std::map<size_t, std::vector<size_t>> dups_by_original;
    for (size_t j = 0; j < dup_of.size(); ++j) dups_by_original[dup_of[j]].push_back(j);

    for (size_t pos = 0; pos < U; ++pos) {
        const auto i = order[pos];
        out.raw.push_back(drafts[i].manifest);
        if (auto it = dups_by_original.find(i); it != dups_by_original.end()) {
            for (auto j : it->second) {
                auto copy = drafts[i].manifest;
                copy.skill_id = fmt::format("skill-{:05d}", U + j + 1);
                copy.endpoint_ref = "ep-" + copy.skill_id;
                out.raw.push_back(std::move(copy));
            }
        }
        if (drafts[i].label) {
            out.backends.push_back(*drafts[i].backend);
            out.labels[drafts[i].manifest.skill_id] = *drafts[i].label;
        }
    }

    // What the analysis of this corpus must find.
    auto& pt = out.planted;
    pt.raw_skills = out.raw.size();
    pt.unique_skills = U;
    for (const auto& label : permission_row_labels()) {
        std::size_t count = 0;
        if (label == "0") {
            count = U - labeled;
        } else {
            for (const auto& row : plan.permission_rows) {
                if (row.label == label) count += row.total;
            }
        }
        pt.permission_table.push_back({label, count});
    }
    for (const auto& g : groups) ++pt.duplication_histogram[g.second];
    if (solo_needed > 0) pt.duplication_histogram[1] = solo_needed;
    std::vector<std::size_t> dev_rows(std::size(kDeveloperRanges), 0);
    for (const auto& [_, n] : devs) ++dev_rows[developer_bucket(n)];
    for (size_t i = 0; i < dev_rows.size(); ++i) pt.developer_table.push_back({kDeveloperLabels[i], dev_rows[i]});
    {
        std::vector<TableRow> ranked;
        for (const auto& [name, n] : devs) ranked.push_back({name, n});
        std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
            return std::tie(b.count, a.label) < std::tie(a.count, b.label);
        });
        ranked.resize(std::min<std::size_t>(3, ranked.size()));
        pt.top_developers = ranked;
    }
    pt.description_counts = desc_counts;
    if (watch_seed_draft) {
        const auto seed_idx = *watch_seed_draft;
        pt.watch_seed = drafts[seed_idx].manifest.skill_id;
        for (auto idx : developer_slots.at(std::string(kAdDeveloper))) {
            if (idx != seed_idx) pt.watch_expected.push_back(drafts[idx].manifest.skill_id);
        }
        std::sort(pt.watch_expected.begin(), pt.watch_expected.end());
    }
    return out;
}

json planted_to_json(const PlantedTables& p) {
    json j;
    j["raw_skills"] = p.raw_skills;
    j["unique_skills"] = p.unique_skills;
    auto rows = [](const std::vector<TableRow>& rs) {
        json a = json::array();
        for (const auto& r : rs) a.push_back({{"label", r.label}, {"count", r.count}});
        return a;
    };
    j["permission_table"] = rows(p.permission_table);
    json hist = json::object();
    for (const auto& [share, n] : p.duplication_histogram) hist[std::to_string(share)] = n;
    j["duplication_histogram"] = hist;
    j["developer_table"] = rows(p.developer_table);
    j["top_developers"] = rows(p.top_developers);
    j["description_counts"] = p.description_counts;
    j["watch_seed"] = p.watch_seed;
    j["watch_expected"] = p.watch_expected;
    return j;
}

void write_corpus_dir(const GeneratedCorpus& corpus, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    {
        std::ofstream out(dir / "corpus.jsonl", std::ios::trunc);
        for (const auto& m : corpus.raw) out << manifest_to_json(m).dump() << '\n';
        if (!out) throw Error("cannot write " + (dir / "corpus.jsonl").string());
    }
    {
        std::ofstream out(dir / "backends.jsonl", std::ios::trunc);
        for (const auto& b : corpus.backends) out << backend_to_json(b).dump() << '\n';
        if (!out) throw Error("cannot write " + (dir / "backends.jsonl").string());
    }
    json labels = json::object();
    for (const auto& [id, v] : corpus.labels) labels[id] = verdict_name(v);
    text::write_file((dir / "labels.json").string(), labels.dump(2) + "\n");
    text::write_file((dir / "planted.json").string(), planted_to_json(corpus.planted).dump(2) + "\n");
}

namespace {

template <class F>
void for_each_line(const std::filesystem::path& path, F&& f) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (text::trim(line).empty()) continue;
        try {
            f(json::parse(line));
        } catch (const json::parse_error& e) {
            throw SchemaError(fmt::format("{}:{}: {}", path.string(), lineno, e.what()));
        } catch (const SchemaError& e) {
            throw SchemaError(fmt::format("{}:{}: {}", path.string(), lineno, e.what()));
        }
    }
}

}  // namespace

std::vector<SkillManifest> read_corpus_jsonl(const std::filesystem::path& path) {
    std::vector<SkillManifest> out;
    for_each_line(path, [&](const json& j) { out.push_back(manifest_from_json(j)); });
    return out;
}

std::vector<BackendSpec> read_backends_jsonl(const std::filesystem::path& path) {
    std::vector<BackendSpec> out;
    for_each_line(path, [&](const json& j) { out.push_back(backend_from_json(j)); });
    return out;
}

std::map<std::string, Verdict> read_labels(const std::filesystem::path& path) {
    std::map<std::string, Verdict> out;
    const auto doc = json::parse(text::read_file(path.string()));
    for (const auto& [id, v] : doc.items()) {
        auto verdict = verdict_from_name(v.get<std::string>());
        if (!verdict) throw SchemaError("unknown verdict for " + id + " in " + path.string());
        out[id] = *verdict;
    }
    return out;
}

}  // namespace skillsec
