#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "spindiff/ising.hpp"
#include "spindiff/linalg.hpp"

namespace spindiff::io {

void write_matrix_csv(const std::string& path, const Mat& m);
void write_vector_csv(const std::string& path, const Vec& v,
                      const std::string& header = "site,value");

/// Estimate records as JSON lines {site, m, se, method, seed}.
void write_estimate_json(const std::string& path,
                         const ising::GibbsEstimate& est);

/// git-style content hash: sha1 of "blob <len>\0<content>".
std::string blob_sha1(const std::string& content);

/// Flat key = value file; '#' starts a comment. Unknown keys are kept so
/// callers can reject or ignore them.
class Config {
public:
    static Config from_file(const std::string& path);
    static Config from_string(const std::string& text);

    bool has(const std::string& key) const;
    double number(const std::string& key) const;
    double number_or(const std::string& key, double fallback) const;
    long integer(const std::string& key) const;
    long integer_or(const std::string& key, long fallback) const;
    std::string text(const std::string& key) const;
    std::string text_or(const std::string& key,
                        const std::string& fallback) const;
    std::vector<double> number_list(const std::string& key) const;

    const std::string& raw() const { return raw_; }
    const std::map<std::string, std::string>& entries() const {
        return entries_;
    }

private:
    std::map<std::string, std::string> entries_;
    std::string raw_;
};

} // namespace spindiff::io
