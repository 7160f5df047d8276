#include "skillsec/sidecar_client.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include <boost/process.hpp>

#include "skillsec/errors.hpp"
#include "skillsec/text.hpp"

namespace skillsec {

namespace bp = boost::process;

struct ExternalEmbedding::Process {
    bp::opstream to_child;
    bp::ipstream from_child;
    bp::child child;
};

SidecarHandshake parse_handshake(std::string_view line) {
    const auto parts = text::split_whitespace(line);
    SidecarHandshake hs;
    if (parts.size() < 3 || parts[0] != "EMBED" || parts[1] != "v1") {
        throw SidecarUnavailableError("bad sidecar handshake: '" + std::string(line) + "'");
    }
    hs.version = 1;
    for (size_t i = 2; i < parts.size(); ++i) {
        const auto& p = parts[i];
        if (text::starts_with(p, "dim=")) {
            const auto v = std::string_view(p).substr(4);
            auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), hs.dim);
            if (ec != std::errc{} || ptr != v.data() + v.size()) hs.dim = 0;
        } else if (text::starts_with(p, "model=")) {
            hs.model = p.substr(6);
        }
    }
    if (hs.dim == 0) throw SidecarUnavailableError("sidecar handshake lacks a dimension: '" + std::string(line) + "'");
    return hs;
}

std::vector<double> parse_vector(std::string_view line, std::size_t dim) {
    if (text::starts_with(line, "ERR")) throw SidecarUnavailableError("sidecar error: " + text::trim(line.substr(3)));
    std::vector<double> v;
    v.reserve(dim);
    for (const auto& tok : text::split_whitespace(line)) {
        try {
            size_t used = 0;
            v.push_back(std::stod(tok, &used));
            if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw SidecarUnavailableError("sidecar sent a non-numeric component '" + tok + "'");
        }
    }
    if (v.size() != dim) {
        throw SidecarUnavailableError("sidecar vector has " + std::to_string(v.size()) + " components, expected " +
                                      std::to_string(dim));
    }
    return v;
}

ExternalEmbedding::ExternalEmbedding(std::vector<std::string> command, double threshold)
    : threshold_(threshold), proc_(std::make_unique<Process>()) {
    if (command.empty()) throw SidecarUnavailableError("no sidecar command configured");
    auto exe = command.front();
    if (exe.find('/') == std::string::npos) {
        const auto found = bp::search_path(exe);
        if (found.empty()) throw SidecarUnavailableError("sidecar executable not found: " + exe);
        exe = found.string();
    }
    std::vector<std::string> args(command.begin() + 1, command.end());
    try {
        proc_->child = bp::child(exe, bp::args(args), bp::std_in < proc_->to_child, bp::std_out > proc_->from_child);
    } catch (const bp::process_error& e) {
        throw SidecarUnavailableError(std::string("cannot start sidecar: ") + e.what());
    }
    std::string line;
    if (!std::getline(proc_->from_child, line)) throw SidecarUnavailableError("sidecar exited before its handshake");
    handshake_ = parse_handshake(line);
}

ExternalEmbedding::~ExternalEmbedding() {
    if (!proc_) return;
    std::error_code ec;
    proc_->to_child.close();
    proc_->to_child.pipe().close();
    if (proc_->child.running(ec)) {
        if (!proc_->child.wait_for(std::chrono::seconds(2), ec)) proc_->child.terminate(ec);
    }
}

std::vector<double> ExternalEmbedding::embed(std::string_view sentence) {
    auto request = text::canonical_whitespace(sentence);
    if (request.empty()) throw EmptyTextError("cannot embed an empty sentence");

    std::lock_guard lock(mutex_);
    if (auto it = cache_.find(request); it != cache_.end()) return it->second;

    proc_->to_child << request << '\n' << std::flush;
    std::string line;
    if (!proc_->to_child || !std::getline(proc_->from_child, line)) {
        throw SidecarUnavailableError("sidecar connection closed");
    }
    auto v = parse_vector(line, handshake_.dim);
    cache_.emplace(std::move(request), v);
    return v;
}

double ExternalEmbedding::similarity(std::string_view a, std::string_view b) {
    if (text::trim(a).empty() || text::trim(b).empty()) throw EmptyTextError("similarity needs two non-empty texts");
    const auto va = embed(a);
    const auto vb = embed(b);
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (size_t i = 0; i < va.size(); ++i) {
        dot += va[i] * vb[i];
        na += va[i] * va[i];
        nb += vb[i] * vb[i];
    }
    if (na == 0.0 || nb == 0.0) return 0.0;
    return std::clamp(dot / std::sqrt(na * nb), 0.0, 1.0);
}

}  // namespace skillsec
