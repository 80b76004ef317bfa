#include "spindiff/io.hpp"

#include <array>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace spindiff::io {

namespace {
std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << std::setprecision(17);
    return out;
}
} // namespace

void write_matrix_csv(const std::string& path, const Mat& m) {
    std::ofstream out = open_out(path);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) out << ',';
            out << m(i, j);
        }
        out << '\n';
    }
}

void write_vector_csv(const std::string& path, const Vec& v,
                      const std::string& header) {
    std::ofstream out = open_out(path);
    out << header << '\n';
    for (Eigen::Index i = 0; i < v.size(); ++i)
        out << i << ',' << v(i) << '\n';
}

void write_estimate_json(const std::string& path,
                         const ising::GibbsEstimate& est) {
    nlohmann::json records = nlohmann::json::array();
    for (Eigen::Index i = 0; i < est.magnetization.size(); ++i) {
        records.push_back({{"site", i},
                           {"m", est.magnetization(i)},
                           {"se", est.std_error(i)},
                           {"method", est.method},
                           {"seed", est.seed}});
    }
    std::ofstream out = open_out(path);
    out << records.dump(2) << '\n';
}

namespace {

// Compact SHA-1, sufficient for content addressing of config files.
struct Sha1 {
    std::array<std::uint32_t, 5> h{0x67452301u, 0xEFCDAB89u, 0x98BADCFEu,
                                   0x10325476u, 0xC3D2E1F0u};

    static std::uint32_t rol(std::uint32_t v, int n) {
        return (v << n) | (v >> (32 - n));
    }

    void block(const unsigned char* p) {
        std::uint32_t w[80];
        for (int i = 0; i < 16; ++i)
            w[i] = (std::uint32_t(p[4 * i]) << 24) |
                   (std::uint32_t(p[4 * i + 1]) << 16) |
                   (std::uint32_t(p[4 * i + 2]) << 8) |
                   std::uint32_t(p[4 * i + 3]);
        for (int i = 16; i < 80; ++i)
            w[i] = rol(w[i - 3] ^ w[i - 8] ^ w[i - 14] ^ w[i - 16], 1);
        std::uint32_t a = h[0], b = h[1], c = h[2], d = h[3], e = h[4];
        for (int i = 0; i < 80; ++i) {
            std::uint32_t f, k;
            if (i < 20) {
                f = (b & c) | (~b & d);
                k = 0x5A827999u;
            } else if (i < 40) {
                f = b ^ c ^ d;
                k = 0x6ED9EBA1u;
            } else if (i < 60) {
                f = (b & c) | (b & d) | (c & d);
                k = 0x8F1BBCDCu;
            } else {
                f = b ^ c ^ d;
                k = 0xCA62C1D6u;
            }
            const std::uint32_t t = rol(a, 5) + f + e + k + w[i];
            e = d;
            d = c;
            c = rol(b, 30);
            b = a;
            a = t;
        }
        h[0] += a;
        h[1] += b;
        h[2] += c;
        h[3] += d;
        h[4] += e;
    }

    std::string digest(const std::string& data) {
        std::string msg = data;
        const std::uint64_t bits = std::uint64_t(data.size()) * 8;
        msg.push_back(static_cast<char>(0x80));
        while (msg.size() % 64 != 56) msg.push_back('\0');
        for (int i = 7; i >= 0; --i)
            msg.push_back(static_cast<char>((bits >> (8 * i)) & 0xFF));
        for (size_t off = 0; off < msg.size(); off += 64)
            block(reinterpret_cast<const unsigned char*>(msg.data() + off));
        std::ostringstream out;
        out << std::hex << std::setfill('0');
        for (std::uint32_t v : h) out << std::setw(8) << v;
        return out.str();
    }
};

} // namespace

std::string blob_sha1(const std::string& content) {
    std::string framed = "blob " + std::to_string(content.size());
    framed.push_back('\0');
    framed += content;
    return Sha1{}.digest(framed);
}

Config Config::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_string(buf.str());
}

Config Config::from_string(const std::string& text) {
    Config cfg;
    cfg.raw_ = text;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    auto trim = [](std::string s) {
        const char* ws = " \t\r\n";
        const size_t a = s.find_first_not_of(ws);
        if (a == std::string::npos) return std::string();
        const size_t b = s.find_last_not_of(ws);
        return s.substr(a, b - a + 1);
    };
    while (std::getline(in, line)) {
        ++lineno;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config line " + std::to_string(lineno) +
                                     ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw std::runtime_error("config line " + std::to_string(lineno) +
                                     ": empty key");
        cfg.entries_[key] = value;
    }
    return cfg;
}

bool Config::has(const std::string& key) const {
    return entries_.count(key) != 0;
}

std::string Config::text(const std::string& key) const {
    auto it = entries_.find(key);
    if (it == entries_.end())
        throw std::runtime_error("missing config key " + key);
    return it->second;
}

std::string Config::text_or(const std::string& key,
                            const std::string& fallback) const {
    return has(key) ? text(key) : fallback;
}

double Config::number(const std::string& key) const {
    const std::string v = text(key);
    size_t used = 0;
    const double x = std::stod(v, &used);
    if (used != v.size())
        throw std::runtime_error("config key " + key + " is not a number");
    return x;
}

double Config::number_or(const std::string& key, double fallback) const {
    return has(key) ? number(key) : fallback;
}

long Config::integer(const std::string& key) const {
    const std::string v = text(key);
    size_t used = 0;
    const long x = std::stol(v, &used);
    if (used != v.size())
        throw std::runtime_error("config key " + key + " is not an integer");
    return x;
}

long Config::integer_or(const std::string& key, long fallback) const {
    return has(key) ? integer(key) : fallback;
}

std::vector<double> Config::number_list(const std::string& key) const {
    std::vector<double> out;
    std::istringstream in(text(key));
    std::string item;
    while (std::getline(in, item, ',')) {
        size_t used = 0;
        out.push_back(std::stod(item, &used));
    }
    if (out.empty()) throw std::runtime_error("config key " + key + " empty");
    return out;
}

} // namespace spindiff::io
