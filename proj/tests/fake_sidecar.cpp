// Stand-in embedding process for the sidecar client tests. Hashes words into
// a fixed number of buckets.
//   fake_sidecar            normal operation, dim=64
//   fake_sidecar badhello   malformed handshake
//   fake_sidecar shortvec   vectors one component short
//   fake_sidecar quit       handshake, then exits on the first request

#include <cctype>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

namespace {

constexpr std::size_t kDim = 64;

std::vector<double> embed(const std::string& line) {
    std::vector<double> v(kDim, 0.0);
    std::string word;
    auto flush = [&] {
        if (word.empty()) return;
        std::uint32_t h = 2166136261u;
        for (unsigned char c : word) h = (h ^ c) * 16777619u;
        v[h % kDim] += 1.0;
        word.clear();
    };
    for (unsigned char c : line) {
        if (std::isalnum(c)) {
            word += static_cast<char>(std::tolower(c));
        } else {
            flush();
        }
    }
    flush();
    double n = 0.0;
    for (double x : v) n += x * x;
    if (n > 0) {
        for (double& x : v) x /= std::sqrt(n);
    }
    return v;
}

}  // namespace

int main(int argc, char** argv) {
    const std::string mode = argc > 1 ? argv[1] : "";
    if (mode == "badhello") {
        std::cout << "HELLO there" << std::endl;
        return 0;
    }
    std::cout << "EMBED v1 dim=" << kDim << " model=fake" << std::endl;
    std::string line;
    while (std::getline(std::cin, line)) {
        if (mode == "quit") return 0;
        if (line.empty()) {
            std::cout << "ERR empty" << std::endl;
            continue;
        }
        if (line.size() > 512) {
            std::cout << "ERR toolong" << std::endl;
            continue;
        }
        auto v = embed(line);
        if (mode == "shortvec") v.pop_back();
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) std::cout << ' ';
            std::cout << v[i];
        }
        std::cout << std::endl;
    }
    return 0;
}
