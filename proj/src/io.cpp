#include "redgeo/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace redgeo::io {

std::string format_double(double v) {
    char buf[40];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc{}) throw std::runtime_error("format_double failed");
    return std::string(buf, ptr);
}

uint64_t fnv1a(const std::string& data) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hash_hex(uint64_t h) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[i] = digits[h & 0xf];
        h >>= 4;
    }
    return out;
}

void write_text(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f << content;
}

namespace {

std::string series_csv(const std::string& header, const MonotoneSeries& s,
                       const std::string& config_hash) {
    std::ostringstream out;
    out << "# config_hash=" << config_hash << "\n" << header << "\n";
    for (size_t i = 0; i < s.arg.size(); ++i)
        out << format_double(s.arg[i]) << ',' << format_double(s.value[i]) << ','
            << static_cast<int>(s.flag[i]) << '\n';
    return out.str();
}

}  // namespace

void write_rv_csv(const std::string& path, const MonotoneSeries& s,
                  const std::string& config_hash) {
    write_text(path, series_csv("tau,value,flag", s, config_hash));
}

void write_i_csv(const std::string& path, const MonotoneSeries& primary,
                 const MonotoneSeries& alternative, const std::string& config_hash) {
    if (primary.arg.size() != alternative.arg.size())
        throw std::invalid_argument("write_i_csv: grid mismatch");
    std::ostringstream out;
    out << "# config_hash=" << config_hash << "\nr,value_primary,value_alternative,flag\n";
    for (size_t i = 0; i < primary.arg.size(); ++i)
        out << format_double(primary.arg[i]) << ',' << format_double(primary.value[i]) << ','
            << format_double(alternative.value[i]) << ','
            << static_cast<int>(primary.flag[i] | alternative.flag[i]) << '\n';
    write_text(path, out.str());
}

void write_j_csv(const std::string& path, const MonotoneSeries& s,
                 const std::string& config_hash) {
    write_text(path, series_csv("r,value,flag", s, config_hash));
}

void write_field_csv(const std::string& path, const ReducedDistanceField& f,
                     const std::string& config_hash) {
    std::ostringstream out;
    out << "# config_hash=" << config_hash << "\ntau,coord,ell,grad_ell,dtau_ell,K\n";
    for (size_t it = 0; it < f.tau.size(); ++it)
        for (size_t ix = 0; ix < f.x.size(); ++ix) {
            const size_t k = f.idx(it, ix);
            out << format_double(f.tau[it]) << ',' << format_double(f.x[ix]) << ','
                << format_double(f.ell[k]) << ',' << format_double(f.grad_ell[k]) << ','
                << format_double(f.dtau_ell[k]) << ',' << format_double(f.kernel[k]) << '\n';
        }
    write_text(path, out.str());
}

std::string limits_json(const std::vector<LimitRecord>& records, const std::string& config_hash) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& rec : records) {
        arr.push_back({{"model", rec.model},
                       {"weight", rec.weight},
                       {"quantity", rec.quantity},
                       {"limit", rec.estimate.value},
                       {"error", rec.estimate.error},
                       {"converged", rec.estimate.converged}});
    }
    nlohmann::ordered_json doc = {{"config_hash", config_hash}, {"limits", arr}};
    return doc.dump(2) + "\n";
}

std::string certification_json(const CertificationReport& rep, const std::string& config_hash) {
    nlohmann::ordered_json doc = {{"weight_id", rep.weight_id},
                                  {"status", cert_status_name(rep.status)},
                                  {"worst_residual", rep.worst_residual},
                                  {"witness_center", rep.witness_center},
                                  {"witness_scale", rep.worst_scale},
                                  {"witness_width", rep.witness_width},
                                  {"witness_tau", rep.witness_tau},
                                  {"tests", rep.tests},
                                  {"config_hash", config_hash}};
    return doc.dump(2) + "\n";
}

}  // namespace redgeo::io
