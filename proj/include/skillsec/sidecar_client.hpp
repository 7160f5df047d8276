#pragma once

// Client for an external sentence-embedding process speaking the line
// protocol: a handshake "EMBED v1 dim=<D> model=<id>", then one sentence per
// request line and one vector (space-separated decimals) or "ERR <reason>"
// per response line.

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include "skillsec/similarity.hpp"

namespace skillsec {

struct SidecarHandshake {
    int version = 0;
    std::size_t dim = 0;
    std::string model;
};

/// Parses a handshake line; throws SidecarUnavailableError when malformed.
SidecarHandshake parse_handshake(std::string_view line);
/// Parses a response line of `dim` decimals; throws SidecarUnavailableError
/// for ERR lines or a wrong dimension.
std::vector<double> parse_vector(std::string_view line, std::size_t dim);

class ExternalEmbedding final : public SimilarityProvider {
public:
    /// Starts `command` (argv form, argv[0] resolved on PATH) and reads the
    /// handshake. Throws SidecarUnavailableError.
    explicit ExternalEmbedding(std::vector<std::string> command, double threshold = kDefaultEmbeddingThreshold);
    ~ExternalEmbedding() override;

    ExternalEmbedding(const ExternalEmbedding&) = delete;
    ExternalEmbedding& operator=(const ExternalEmbedding&) = delete;

    std::string_view provider_id() const override { return "embedding"; }
    double threshold() const override { return threshold_; }
    double similarity(std::string_view a, std::string_view b) override;

    const SidecarHandshake& handshake() const { return handshake_; }
    std::vector<double> embed(std::string_view sentence);

private:
    struct Process;

    double threshold_;
    SidecarHandshake handshake_;
    std::mutex mutex_;  // one request in flight per connection
    std::unique_ptr<Process> proc_;
    std::map<std::string, std::vector<double>, std::less<>> cache_;
};

}  // namespace skillsec
