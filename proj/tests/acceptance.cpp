// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <algorithm>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>

#include <fmt/format.h>

#include "skillsec/analytics.hpp"
#include "skillsec/config.hpp"
#include "skillsec/content_monitor.hpp"
#include "skillsec/corpus_gen.hpp"
#include "skillsec/ecosystem.hpp"
#include "skillsec/feed.hpp"
#include "skillsec/question_guard.hpp"
#include "skillsec/scenario.hpp"
#include "skillsec/schema.hpp"
#include "skillsec/text.hpp"
#include "skillsec/vetting.hpp"

using namespace skillsec;
namespace fs = std::filesystem;

namespace {

fs::path fixture(const std::string& rel) { return fs::path(SKILLSEC_FIXTURE_DIR) / rel; }

// Collects failed checks; a criterion passes when none failed.
struct Check {
    std::vector<std::string> failures;
    void expect(bool ok, const std::string& what) {
        if (!ok) failures.push_back(what);
    }
};

const GeneratedCorpus& corpus() {
    static const GeneratedCorpus c = [] {
        auto plan = CorpusPlan::survey();
        plan.seed = 7;
        return generate_corpus(plan);
    }();
    return c;
}

void scenario_replay(Check& c) {
    const auto r = run_scenario_file(fixture("scenarios/joke_swap.json"));
    const auto again = run_scenario_file(fixture("scenarios/joke_swap.json"));
    c.expect(r.transcript() == again.transcript(), "replay is not deterministic");

    const auto swap = std::find_if(r.events.begin(), r.events.end(), [](const auto& e) { return e.kind == "swap"; });
    c.expect(swap != r.events.end() && swap->data.at("accepted") == true &&
                 swap->data.at("revetting_required") == false,
             "swap must be accepted without re-vetting");

    auto lexical = LexicalSimilarity::bundled(kDefaultLexicalThreshold);
    const auto m = load_manifest_file(fixture("joke_v1/manifest.json"));
    const auto findings = scan_update(load_backend_file(fixture("joke_v1/backend.json"), &m),
                                      load_backend_file(fixture("joke_v2/backend.json"), &m), Blacklist::bundled(),
                                      lexical);
    std::vector<std::string> flagged;
    for (const auto& f : findings) {
        if (f.change_kind == ChangeKind::Added && f.classification == Classification::Sensitive) {
            flagged.push_back(f.question);
        }
    }
    c.expect(flagged == std::vector<std::string>{"Are you home alone?"},
             fmt::format("expected one Added Sensitive question, got {}", flagged.size()));

    const std::vector<std::string> s1{"Welcome to Joke Time.", "Let's get started. Do you want to hear a joke?",
                                      "The scarecrow won an award because he was outstanding in his field.",
                                      "Let's get started. Do you want to hear a joke?"};
    c.expect(r.responses.at("s1") == s1, "in-flight session did not replay the first version");
    c.expect(r.responses.at("s2").at(1) == "Let's get started. Are you home alone?",
             "new session did not ask the new question");
    c.expect(r.session_versions.at("s1") == 1 && r.session_versions.at("s2") == 2, "session pinning");
}

void differential_oracle(Check& c) {
    const auto& g = corpus();
    c.expect(g.labels.size() >= 200, "fewer than 200 labeled skills");
    const std::vector<std::size_t> rows{16, 23, 41};
    for (size_t i = 0; i < rows.size(); ++i) {
        c.expect(g.planted.permission_table.at(i).count == rows[i], "permission row " + std::to_string(i));
    }

    std::map<std::string, std::pair<std::string, std::string>> reference;
    std::ifstream in(fs::path(SKILLSEC_GOLDEN_DIR) / "differential_seed7.tsv");
    for (std::string line; std::getline(in, line);) {
        const auto a = line.find('\t');
        const auto b = line.find('\t', a + 1);
        if (b == std::string::npos) continue;
        reference[line.substr(0, a)] = {line.substr(a + 1, b - a - 1), line.substr(b + 1)};
    }
    c.expect(reference.size() == g.labels.size(), "reference script output does not cover the labeled set");

    std::map<std::string, const BackendSpec*> backends;
    for (const auto& b : g.backends) backends[b.endpoint_ref] = &b;
    std::set<Verdict> seen;
    std::size_t label_errors = 0, reference_errors = 0;
    for (const auto& m : g.raw) {
        const auto label = g.labels.find(m.skill_id);
        if (label == g.labels.end()) continue;
        const auto cls = differential_permission_test(m, *backends.at(m.endpoint_ref), default_utterance_suite(m));
        seen.insert(label->second);
        if (cls.verdict != label->second) ++label_errors;
        std::string unused;
        for (const auto& k : sensitive_kinds()) {
            if (cls.unused_granted_fields.contains(k)) unused += (unused.empty() ? "" : ",") + k.name();
        }
        const auto ref = reference.find(m.skill_id);
        if (ref == reference.end() || ref->second.first != verdict_name(cls.verdict) || ref->second.second != unused) {
            ++reference_errors;
        }
    }
    c.expect(seen.size() == 4, "labels do not span all four verdicts");
    c.expect(label_errors == 0, fmt::format("{} label mismatches", label_errors));
    c.expect(reference_errors == 0, fmt::format("{} reference-script mismatches", reference_errors));
}

void daddy_saturday(Check& c) {
    const auto b = load_skill_dir(fixture("daddy_saturday"));
    const auto cls =
        differential_permission_test(b.manifest, b.backend, default_utterance_suite(b.manifest));
    c.expect(cls.verdict == Verdict::LegitimateOverUsed, "verdict");
    c.expect(cls.unused_granted_fields == PermissionSet{PermissionKind::full_name(), PermissionKind::email()},
             "unused fields");
}

void blacklist_integrity(Check& c) {
    const auto bl = Blacklist::bundled();
    auto p = LexicalSimilarity::bundled(kDefaultLexicalThreshold);
    c.expect(bl.entries.size() == 51, fmt::format("blacklist has {} entries", bl.entries.size()));
    for (const auto& e : bl.entries) {
        c.expect(classify(score_against_blacklist(p, e, bl).score, p.threshold()) == Classification::Sensitive,
                 "entry not Sensitive: " + e);
    }
    const auto benign = text::list_lines(text::read_file(std::string(SKILLSEC_DATA_DIR) + "/benign_questions.txt"));
    c.expect(benign.size() == 20, "benign set size");
    for (const auto& q : benign) {
        c.expect(classify(score_against_blacklist(p, q, bl).score, p.threshold()) == Classification::Benign,
                 "benign question flagged: " + q);
    }
    std::vector<std::string> vocab;
    for (const auto& s : bl.entries) {
        for (const auto& w : text::split_whitespace(s)) vocab.push_back(w);
    }
    for (const auto& s : benign) {
        for (const auto& w : text::split_whitespace(s)) vocab.push_back(w);
    }
    std::mt19937_64 rng(4);
    for (int i = 0; i < 1000; ++i) {
        std::string a, b;
        for (int n = 1 + static_cast<int>(rng() % 6); n > 0; --n) a += vocab[rng() % vocab.size()] + " ";
        for (int n = 1 + static_cast<int>(rng() % 6); n > 0; --n) b += vocab[rng() % vocab.size()] + " ";
        const double ab = p.similarity(a, b);
        if (ab != p.similarity(b, a)) c.expect(false, "asymmetric: " + a + "| " + b);
        if (std::abs(p.similarity(a, a) - 1.0) > 1e-9) {
            c.expect(false, "self-similarity: " + a);
        }
    }
}

void monitor_soundness(Check& c) {
    const auto cfg = load_config(bundled_data_dir() / "config.json");
    const auto lex = Lexicons::load(cfg.lexicon_dir);
    auto read = [](const std::string& name) {
        return parse_feed(text::read_file(fixture("feeds/" + name).string()), FeedFormat::RSS, "daily-jokes");
    };
    const auto base = read("jokes.rss");
    std::set<std::string> rejected;
    for (const std::string cat : {"ads", "voting", "fake_news", "rude", "porn", "political"}) {
        const auto snap = read("manipulated_" + cat + ".rss");
        const double drift = diff_snapshots(base, snap).drift;
        c.expect(drift >= cfg.alert_level, fmt::format("{} drift {:.3f} below alert level", cat, drift));
        const auto f = policy_scan(snap, lex);
        if (std::any_of(f.begin(), f.end(), [](const auto& x) { return x.severity == Severity::Reject; })) {
            rejected.insert(cat);
        }
    }
    c.expect(rejected == std::set<std::string>{"porn", "rude"}, "Reject set differs from {porn, rude}");
}

void certification(Check& c) {
    const auto lex = Lexicons::bundled();
    auto vet = [&](const std::string& dir) {
        const auto b = load_skill_dir(fixture(dir));
        return run_certification(b.manifest, b.backend, lex);
    };
    const auto joke = vet("joke_v1");
    c.expect(joke.functional.pass && joke.voice_interface.pass && joke.policy.pass && joke.security.pass,
             "joke_v1 must pass all four");
    c.expect(!vet("porn_feed").policy.pass, "porn feed must fail policy");
    c.expect(!vet("kids_email").policy.pass, "kids skill requesting email must fail policy");
    c.expect(!vet("exfil_unrequested").security.pass, "unrequested exfiltration must fail security");
}

void invocation_resolution(Check& c) {
    std::vector<SkillManifest> corpus;
    for (int i = 0; i < 41; ++i) {
        SkillManifest m;
        m.skill_id = fmt::format("space-{:02d}", i);
        m.display_name = m.skill_id;
        m.invocation_name = "space facts";
        m.categories = {"Education"};
        m.endpoint_ref = "ep-" + m.skill_id;
        m.intents = {{"MainIntent", {"go"}, {}}};
        m.rating = 3.0 + (i % 5) * 0.25;
        m.popularity = i == 17 ? 5000 : 100 + i;
        corpus.push_back(m);
    }
    UserProfile none;
    none.user_id = "u0";
    c.expect(resolve_invocation(none, "space facts", corpus) == "space-17", "rule 1: most popular");

    UserProfile one = none;
    one.enabled["space-03"] = 5;
    c.expect(resolve_invocation(one, "space facts", corpus) == "space-03", "rule 2: the enabled skill");

    UserProfile several = none;
    several.enabled["space-00"] = 1;
    several.enabled["space-04"] = 2;
    several.enabled["space-02"] = 3;
    c.expect(resolve_invocation(several, "space facts", corpus) == "space-04", "rule 3: highest rating");
    UserProfile tie = none;
    tie.enabled["space-01"] = 2;
    tie.enabled["space-06"] = 1;
    c.expect(resolve_invocation(tie, "space facts", corpus) == "space-06", "rule 3: earliest enabled on a tie");

    std::mt19937_64 rng(100);
    for (int i = 0; i < 100; ++i) {
        std::shuffle(corpus.begin(), corpus.end(), rng);
        c.expect(resolve_invocation(none, "space facts", corpus) == "space-17" &&
                     resolve_invocation(one, "space facts", corpus) == "space-03" &&
                     resolve_invocation(several, "space facts", corpus) == "space-04" &&
                     resolve_invocation(tie, "space facts", corpus) == "space-06",
                 fmt::format("shuffle {} changed a resolution", i));
    }
}

void analytics(Check& c) {
    const auto& g = corpus();
    const auto unique = dedup_corpus(g.raw);
    const auto s = compute_stats(unique);
    c.expect(unique.size() == g.planted.unique_skills, "dedup size");
    c.expect(s.permission_table == g.planted.permission_table, "permission table");
    c.expect(s.duplication_histogram == g.planted.duplication_histogram, "duplication histogram");
    c.expect(s.duplication_histogram.count(2) && s.duplication_histogram.at(2) == 822, "histogram[2]");
    c.expect(s.duplication_histogram.count(41) && s.duplication_histogram.at(41) == 1, "histogram[41]");
    c.expect(s.developer_table == g.planted.developer_table, "developer buckets");
    std::vector<std::size_t> desc;
    for (const auto& r : s.description_length_distribution) desc.push_back(r.count);
    c.expect(desc == g.planted.description_counts, "description buckets");
    const auto twice = dedup_corpus(unique);
    c.expect(twice.size() == unique.size() &&
                 std::equal(twice.begin(), twice.end(), unique.begin(),
                            [](const auto& a, const auto& b) { return a.skill_id == b.skill_id; }),
             "dedup is not idempotent");
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<void(Check&)>>> criteria{
        {"scenario replay", scenario_replay},
        {"differential tester oracle equivalence", differential_oracle},
        {"legitimate over-use semantics", daddy_saturday},
        {"blacklist integrity", blacklist_integrity},
        {"content monitor soundness", monitor_soundness},
        {"certification engine", certification},
        {"invocation resolution", invocation_resolution},
        {"analytics reproduction", analytics},
    };
    int failed = 0;
    for (size_t i = 0; i < criteria.size(); ++i) {
        Check c;
        try {
            criteria[i].second(c);
        } catch (const std::exception& e) {
            c.failures.push_back(std::string("exception: ") + e.what());
        }
        const bool ok = c.failures.empty();
        failed += !ok;
        std::cout << fmt::format("{} {} {}", ok ? "PASS" : "FAIL", i + 1, criteria[i].first);
        if (!ok) std::cout << ": " << c.failures.front() << (c.failures.size() > 1 ? fmt::format(" (+{} more)", c.failures.size() - 1) : "");
        std::cout << '\n';
    }
    return failed == 0 ? 0 : 1;
}
