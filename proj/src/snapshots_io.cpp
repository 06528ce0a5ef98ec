#include <fstream>
#include <sstream>

#include "specrkhs/dynamics.hpp"
#include "specrkhs/text_io.hpp"

namespace specrkhs {

std::string write_snapshots_csv(const SnapshotSet& s) {
    std::ostringstream out;
    out << "d=" << s.dim() << ",s=" << s.samples() << "\n";
    for (Eigen::Index i = 0; i < s.count(); ++i) {
        bool first = true;
        auto emit = [&](cplx v) {
            if (!first) out << ',';
            out << format_complex(v);
            first = false;
        };
        for (int k = 0; k < s.dim(); ++k) emit(s.X(i, k));
        for (const auto& y : s.Y)
            for (int k = 0; k < s.dim(); ++k) emit(y(i, k));
        out << "\n";
    }
    return out.str();
}

SnapshotSet read_snapshots_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw InvalidInput("snapshot CSV: missing header");
    auto header = parse_key_values(trim(line), "snapshot CSV header");
    if (!header.count("d") || !header.count("s") || header.size() != 2)
        throw InvalidInput("snapshot CSV: header must be d=<dim>,s=<samples>");
    const long long d = parse_int(header["d"], "snapshot CSV header d");
    const long long s = parse_int(header["s"], "snapshot CSV header s");
    if (d < 1 || s < 1) throw InvalidInput("snapshot CSV: d and s must be >= 1");

    std::vector<std::vector<cplx>> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        auto fields = split(line, ',');
        if (fields.size() != static_cast<std::size_t>(d * (1 + s)))
            throw InvalidInput("snapshot CSV line " + std::to_string(line_no) + ": expected " +
                               std::to_string(d * (1 + s)) + " fields, got " + std::to_string(fields.size()));
        std::vector<cplx> row;
        row.reserve(fields.size());
        for (const auto& f : fields) row.push_back(parse_complex(f));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw InvalidInput("snapshot CSV: no data rows");

    SnapshotSet out;
    const Eigen::Index n = static_cast<Eigen::Index>(rows.size());
    out.X.resize(n, d);
    out.Y.assign(static_cast<std::size_t>(s), Mat(n, d));
    for (Eigen::Index i = 0; i < n; ++i) {
        for (long long k = 0; k < d; ++k) out.X(i, k) = rows[i][k];
        for (long long b = 0; b < s; ++b)
            for (long long k = 0; k < d; ++k) out.Y[b](i, k) = rows[i][(1 + b) * d + k];
    }
    out.validate();
    return out;
}

SnapshotSet load_snapshots_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInput("cannot open snapshot file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return read_snapshots_csv(buf.str());
}

} // namespace specrkhs
