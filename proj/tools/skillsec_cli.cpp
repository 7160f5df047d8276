// skillsec: vetting, simulation and monitoring front end.
//
// Exit codes: 0 pass, 1 findings (failed vetting, sensitive question, feed
// alert), 2 usage or input error.

#include <chrono>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "skillsec/analytics.hpp"
#include "skillsec/config.hpp"
#include "skillsec/content_monitor.hpp"
#include "skillsec/corpus_gen.hpp"
#include "skillsec/errors.hpp"
#include "skillsec/question_guard.hpp"
#include "skillsec/report.hpp"
#include "skillsec/scenario.hpp"
#include "skillsec/schema.hpp"
#include "skillsec/sidecar_client.hpp"
#include "skillsec/similarity.hpp"
#include "skillsec/text.hpp"
#include "skillsec/vetting.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace skillsec;

namespace {

constexpr int kPass = 0;
constexpr int kFindings = 1;
constexpr int kInputError = 2;

struct Globals {
    std::string config_path;
    std::string format;
};

struct VetArgs {
    std::string target;
    std::string backend;
    std::string suite;
    std::string lexicons;
    std::string report;
};

struct ScanArgs {
    std::string old_path;
    std::string new_path;
    std::string provider;
    std::optional<double> threshold;
    std::string blacklist;
};

struct MonitorArgs {
    std::string skill_id;
    std::string source;
    std::string format;
    bool once = false;
    std::optional<double> interval;
    std::optional<std::int64_t> at;
    std::optional<std::size_t> count;
};

struct AnalyzeArgs {
    std::string dir;
    std::vector<std::string> emit{"all"};
    std::vector<std::string> watch;
};

struct GenArgs {
    std::uint64_t seed = 42;
    std::string out;
    std::string plan;
};

bool structured(const Config& cfg) { return cfg.report_format == ReportFormat::Structured; }

void emit(const Config& cfg, const json& j, const std::string& txt) {
    if (structured(cfg)) {
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << txt;
    }
}

// A skill is either a directory with manifest.json and backend.json, or a
// manifest file plus a backend file.
SkillBundle load_skill(const std::string& target, const std::string& backend) {
    if (fs::is_directory(target)) {
        if (!backend.empty()) throw UsageError("a skill directory already contains its backend");
        return load_skill_dir(target);
    }
    if (backend.empty()) throw UsageError("vet needs a skill directory or <manifest> <backend>");
    SkillBundle b;
    b.manifest = load_manifest_file(target);
    b.backend = load_backend_file(backend, &b.manifest);
    return b;
}

BackendSpec load_backend_arg(const std::string& path) {
    if (fs::is_directory(path)) return load_skill_dir(path).backend;
    return load_backend_file(path);
}

int run_vet(const Config& cfg, const VetArgs& a) {
    const auto skill = load_skill(a.target, a.backend);
    const auto lex = Lexicons::load(a.lexicons.empty() ? cfg.lexicon_dir : fs::path(a.lexicons));
    CertificationOptions opts;
    opts.profile_seed = cfg.profile_seed;
    if (!a.suite.empty()) {
        opts.suite = text::list_lines(text::read_file(a.suite));
        if (opts.suite.empty()) throw SuiteEmptyError("suite file " + a.suite + " has no utterances");
    }
    const auto report = run_certification(skill.manifest, skill.backend, lex, opts);
    emit(cfg, to_json(report), to_text(report));
    if (!a.report.empty()) text::write_file(a.report, to_json(report).dump(2) + "\n");
    return report.publishable() ? kPass : kFindings;
}

int run_simulate(const Config& cfg, const std::string& scenario) {
    const auto res = run_scenario_file(scenario, cfg.profile_seed);
    std::string txt;
    for (const auto& line : res.transcript()) txt += line + "\n";
    emit(cfg, res.to_json(), txt);
    return kPass;
}

std::unique_ptr<SimilarityProvider> make_provider(const Config& cfg, const ScanArgs& a) {
    ProviderKind kind = cfg.provider;
    if (a.provider == "lexical") kind = ProviderKind::Lexical;
    else if (a.provider == "embedding") kind = ProviderKind::Embedding;
    if (kind == ProviderKind::Lexical) {
        const double t = a.threshold.value_or(cfg.lexical_threshold);
        return std::make_unique<LexicalSimilarity>(LexicalSimilarity::load(cfg.similarity_dir, t));
    }
    if (cfg.sidecar_command.empty()) throw ConfigError("provider 'embedding' needs sidecar_command in the config");
    return std::make_unique<ExternalEmbedding>(cfg.sidecar_command, a.threshold.value_or(cfg.embedding_threshold));
}

int run_question_scan(const Config& cfg, const ScanArgs& a) {
    const auto old_b = load_backend_arg(a.old_path);
    const auto new_b = load_backend_arg(a.new_path);
    const auto bl = Blacklist::load(a.blacklist.empty() ? cfg.blacklist_path : fs::path(a.blacklist));
    auto provider = make_provider(cfg, a);
    const auto findings = scan_update(old_b, new_b, bl, *provider);
    emit(cfg, to_json(findings, provider->provider_id(), provider->threshold()),
         to_text(findings, provider->provider_id(), provider->threshold()));
    const bool sensitive = std::any_of(findings.begin(), findings.end(), [](const QuestionFinding& f) {
        return f.score && f.classification == Classification::Sensitive;
    });
    return sensitive ? kFindings : kPass;
}

Monitor make_monitor(const Config& cfg) {
    return Monitor(cfg.snapshot_store, Lexicons::load(cfg.lexicon_dir), cfg.alert_level, cfg.fetch);
}

int run_monitor_add(const Config& cfg, const MonitorArgs& a) {
    const auto fmt_kind = feed_format_from_name(a.format);
    if (!fmt_kind) throw UsageError("format must be rss or json");
    std::string source = a.source;
    if (source.find("://") == std::string::npos) source = fs::absolute(source).lexically_normal().string();
    make_monitor(cfg).add({a.skill_id, source, *fmt_kind});
    emit(cfg, {{"added", a.skill_id}, {"source", source}, {"format", a.format}},
         fmt::format("watching {} <- {} ({})\n", a.skill_id, source, a.format));
    return kPass;
}

std::int64_t wall_clock() {
    return std::chrono::duration_cast<std::chrono::seconds>(std::chrono::system_clock::now().time_since_epoch())
        .count();
}

int run_monitor_poll(const Config& cfg, const MonitorArgs& a) {
    if (a.once && a.interval) throw UsageError("--once and --interval are exclusive");
    auto mon = make_monitor(cfg);
    const std::size_t rounds = a.interval ? a.count.value_or(0) : 1;  // 0: until interrupted
    bool alert = false;
    bool failed = false;
    for (std::size_t round = 0; rounds == 0 || round < rounds; ++round) {
        if (round > 0) std::this_thread::sleep_for(std::chrono::duration<double>(*a.interval));
        const std::int64_t t =
            a.at ? *a.at + static_cast<std::int64_t>(round * static_cast<std::size_t>(a.interval.value_or(0)))
                 : wall_clock();
        const auto results = mon.poll_once(t);
        json arr = json::array();
        std::string txt;
        for (const auto& r : results) {
            arr.push_back(to_json(r));
            txt += to_text(r);
            alert |= r.alert;
            failed |= !r.error.empty();
        }
        emit(cfg, {{"taken_at", t}, {"results", arr}}, txt);
        std::cout.flush();
    }
    if (failed) return kInputError;
    return alert ? kFindings : kPass;
}

int run_monitor_report(const Config& cfg, const MonitorArgs& a) {
    const auto rep = make_monitor(cfg).report(a.skill_id);
    emit(cfg, to_json(rep), to_text(rep));
    return rep.alert ? kFindings : kPass;
}

int run_analyze(const Config& cfg, const AnalyzeArgs& a) {
    const fs::path dir(a.dir);
    const auto raw = read_corpus_jsonl(fs::is_directory(dir) ? dir / "corpus.jsonl" : dir);
    const auto corpus = dedup_corpus(raw);
    std::vector<std::string> sections;
    for (const auto& e : a.emit) {
        if (e == "all") {
            sections.clear();
            break;
        }
        sections.push_back(e);
    }
    const auto stats = compute_stats(corpus);
    json j = to_json(stats, sections);
    j["raw_skills"] = raw.size();
    std::string txt = fmt::format("raw listings: {}\nunique skills: {}\n", raw.size(), corpus.size());
    txt += to_text(stats, sections);
    if (!a.watch.empty()) {
        const auto watch = flag_multi_skill_developers(corpus, a.watch);
        json w = json::array();
        txt += "\nWatchlist\n";
        for (const auto& e : watch) {
            w.push_back({{"developer", e.developer}, {"developer_skills", e.developer_skill_count}, {"skill_id", e.skill_id}});
            txt += fmt::format("  {} ({} skills) {}\n", e.developer, e.developer_skill_count, e.skill_id);
        }
        j["watchlist"] = w;
    }
    emit(cfg, j, txt);
    return kPass;
}

int run_gen_corpus(const Config& cfg, const GenArgs& a) {
    CorpusPlan plan;
    if (a.plan.empty()) {
        plan = CorpusPlan::survey();
    } else {
        json doc;
        try {
            doc = json::parse(text::read_file(a.plan));
        } catch (const json::parse_error& e) {
            throw ConfigError("plan " + a.plan + ": " + e.what());
        }
        plan = CorpusPlan::from_json(doc);
    }
    plan.seed = a.seed;
    const auto corpus = generate_corpus(plan);
    write_corpus_dir(corpus, a.out);
    emit(cfg,
         {{"out", a.out}, {"raw", corpus.raw.size()}, {"labeled", corpus.labels.size()}, {"seed", a.seed}},
         fmt::format("wrote {} listings ({} unique, {} labeled backends) to {}\n", corpus.raw.size(),
                     corpus.planted.unique_skills, corpus.labels.size(), a.out));
    return kPass;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Skill vetting, simulation and feed monitoring"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--config", g.config_path, "Config file (default: $SKILLSEC_CONFIG or bundled)");
    app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"text", "json"}));

    VetArgs vet;
    auto* vet_cmd = app.add_subcommand("vet", "Run the certification tests on a skill");
    vet_cmd->add_option("target", vet.target, "Skill directory or manifest file")->required();
    vet_cmd->add_option("backend", vet.backend, "Backend file when target is a manifest");
    vet_cmd->add_option("--suite", vet.suite, "Utterance suite, one per line")->check(CLI::ExistingFile);
    vet_cmd->add_option("--lexicons", vet.lexicons, "Lexicon directory")->check(CLI::ExistingDirectory);
    vet_cmd->add_option("--report", vet.report, "Also write the JSON report here");

    std::string scenario;
    auto* sim_cmd = app.add_subcommand("simulate", "Replay a scenario script");
    sim_cmd->add_option("scenario", scenario, "Scenario file")->required()->check(CLI::ExistingFile);

    ScanArgs scan;
    auto* scan_cmd = app.add_subcommand("question-scan", "Screen new backend questions against the blacklist");
    scan_cmd->add_option("old", scan.old_path, "Old backend file or skill directory")->required();
    scan_cmd->add_option("new", scan.new_path, "New backend file or skill directory")->required();
    scan_cmd->add_option("--provider", scan.provider)->check(CLI::IsMember({"lexical", "embedding"}));
    scan_cmd->add_option("--threshold", scan.threshold)->check(CLI::Range(0.0, 1.0));
    scan_cmd->add_option("--blacklist", scan.blacklist)->check(CLI::ExistingFile);

    MonitorArgs mon;
    auto* mon_cmd = app.add_subcommand("monitor", "Watch skill feeds for content changes");
    mon_cmd->require_subcommand(1);
    auto* add_cmd = mon_cmd->add_subcommand("add", "Register a feed");
    add_cmd->add_option("skill_id", mon.skill_id)->required();
    add_cmd->add_option("source", mon.source, "Feed URL or path")->required();
    add_cmd->add_option("format", mon.format, "rss or json")->required()->check(CLI::IsMember({"rss", "json"}));
    auto* poll_cmd = mon_cmd->add_subcommand("poll", "Snapshot every registered feed");
    poll_cmd->add_flag("--once", mon.once, "Poll a single time (default)");
    poll_cmd->add_option("--interval", mon.interval, "Seconds between polls")->check(CLI::PositiveNumber);
    poll_cmd->add_option("--count", mon.count, "Stop after this many polls (with --interval)");
    poll_cmd->add_option("--at", mon.at, "Logical snapshot time instead of the wall clock");
    auto* rep_cmd = mon_cmd->add_subcommand("report", "History and latest findings of one feed");
    rep_cmd->add_option("skill_id", mon.skill_id)->required();

    AnalyzeArgs an;
    auto* an_cmd = app.add_subcommand("analyze", "Market statistics over a corpus");
    an_cmd->add_option("corpus", an.dir, "Corpus directory or corpus.jsonl")->required()->check(CLI::ExistingPath);
    an_cmd->add_option("--emit", an.emit, "Sections to print")
        ->check(CLI::IsMember({"table4", "fig7", "table6", "table8", "all"}))
        ->delimiter(',');
    an_cmd->add_option("--watch", an.watch, "Seed skill ids whose developers' other skills are listed");

    GenArgs gen;
    auto* gen_cmd = app.add_subcommand("gen-corpus", "Generate a synthetic corpus with planted labels");
    gen_cmd->add_option("--seed", gen.seed);
    gen_cmd->add_option("--out", gen.out, "Output directory")->required();
    gen_cmd->add_option("--plan", gen.plan, "JSON overrides of the default plan")->check(CLI::ExistingFile);

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kInputError;
    }

    try {
        auto cfg = load_config(g.config_path.empty() ? std::nullopt : std::optional<fs::path>(g.config_path));
        if (g.format == "json") cfg.report_format = ReportFormat::Structured;
        if (g.format == "text") cfg.report_format = ReportFormat::Text;

        if (vet_cmd->parsed()) return run_vet(cfg, vet);
        if (sim_cmd->parsed()) return run_simulate(cfg, scenario);
        if (scan_cmd->parsed()) return run_question_scan(cfg, scan);
        if (add_cmd->parsed()) return run_monitor_add(cfg, mon);
        if (poll_cmd->parsed()) return run_monitor_poll(cfg, mon);
        if (rep_cmd->parsed()) return run_monitor_report(cfg, mon);
        if (an_cmd->parsed()) return run_analyze(cfg, an);
        if (gen_cmd->parsed()) return run_gen_corpus(cfg, gen);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    }
    return kInputError;
}
