#include "specrkhs/text_io.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

namespace specrkhs {

bool is_real(const Mat& m) {
    const double* p = reinterpret_cast<const double*>(m.data());
    const Eigen::Index n = m.size();
    for (Eigen::Index i = 0; i < n; ++i)
        if (p[2 * i + 1] != 0.0) return false;
    return true;
}

std::string to_lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::string trim(std::string_view s) {
    std::size_t lo = 0, hi = s.size();
    while (lo < hi && std::isspace(static_cast<unsigned char>(s[lo]))) ++lo;
    while (hi > lo && std::isspace(static_cast<unsigned char>(s[hi - 1]))) --hi;
    return std::string(s.substr(lo, hi - lo));
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = s.find(sep, start);
        if (pos == std::string_view::npos) {
            out.emplace_back(s.substr(start));
            break;
        }
        out.emplace_back(s.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

double parse_double(const std::string& s, const std::string& what) {
    std::string t = trim(s);
    if (t.empty()) throw InvalidInput(what + ": empty number");
    errno = 0;
    char* end = nullptr;
    double v = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size() || errno == ERANGE)
        throw InvalidInput(what + ": cannot parse '" + t + "' as a number");
    return v;
}

long long parse_int(const std::string& s, const std::string& what) {
    std::string t = trim(s);
    if (t.empty()) throw InvalidInput(what + ": empty integer");
    errno = 0;
    char* end = nullptr;
    long long v = std::strtoll(t.c_str(), &end, 10);
    if (end != t.c_str() + t.size() || errno == ERANGE)
        throw InvalidInput(what + ": cannot parse '" + t + "' as an integer");
    return v;
}

std::map<std::string, std::string> parse_key_values(const std::string& body, const std::string& what) {
    std::map<std::string, std::string> out;
    if (trim(body).empty()) return out;
    for (const auto& item : split(body, ',')) {
        auto eq = item.find('=');
        if (eq == std::string::npos) throw InvalidInput(what + ": expected key=value, got '" + item + "'");
        std::string key = to_lower(trim(std::string_view(item).substr(0, eq)));
        std::string value = trim(std::string_view(item).substr(eq + 1));
        if (key.empty()) throw InvalidInput(what + ": empty key");
        if (!out.emplace(key, value).second) throw InvalidInput(what + ": duplicate key '" + key + "'");
    }
    return out;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string format_complex(cplx z) {
    if (z.imag() == 0.0) return format_double(z.real());
    std::string im = format_double(z.imag());
    if (im[0] != '-' ) im = "+" + im;
    return format_double(z.real()) + im + "i";
}

cplx parse_complex(const std::string& raw) {
    std::string s = to_lower(trim(raw));
    if (s.empty()) throw InvalidInput("complex literal: empty field");
    if (s.back() != 'i') return {parse_double(s, "complex literal"), 0.0};
    std::string body = s.substr(0, s.size() - 1);
    // Split at the last sign that is not the leading sign and not part of an exponent.
    for (std::size_t p = body.size(); p-- > 1;) {
        char ch = body[p];
        if ((ch == '+' || ch == '-') && body[p - 1] != 'e') {
            double re = parse_double(body.substr(0, p), "complex literal");
            std::string im_text = body.substr(p);
            if (im_text == "+" || im_text == "-") im_text += "1";
            double im = parse_double(im_text, "complex literal");
            return {re, im};
        }
    }
    if (body.empty() || body == "+" || body == "-") body += "1";
    return {0.0, parse_double(body, "complex literal")};
}

void atomic_write_file(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    fs::path tmp = target;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw InvalidInput("cannot open '" + tmp.string() + "' for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) throw InvalidInput("failed writing '" + tmp.string() + "'");
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp);
        throw InvalidInput("cannot move output into place at '" + path + "': " + ec.message());
    }
}

std::uint64_t fnv1a(const void* data, std::size_t bytes, std::uint64_t seed) {
    const auto* p = static_cast<const unsigned char*>(data);
    std::uint64_t h = seed;
    for (std::size_t i = 0; i < bytes; ++i) {
        h ^= p[i];
        h *= 1099511628211ull;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

} // namespace specrkhs
