#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "redgeo/functionals.hpp"
#include "redgeo/lgeo.hpp"
#include "redgeo/weight.hpp"

namespace redgeo::io {

std::string format_double(double v);  // shortest round-trip, locale-free

uint64_t fnv1a(const std::string& data);
std::string hash_hex(uint64_t h);

// All writers are deterministic: identical inputs yield byte-identical files.
// The config hash rides in a leading comment so the column set stays fixed.

// columns: tau,value,flag
void write_rv_csv(const std::string& path, const MonotoneSeries& s,
                  const std::string& config_hash);

// columns: r,value_primary,value_alternative,flag
void write_i_csv(const std::string& path, const MonotoneSeries& primary,
                 const MonotoneSeries& alternative, const std::string& config_hash);

// columns: r,value,flag
void write_j_csv(const std::string& path, const MonotoneSeries& s,
                 const std::string& config_hash);

// columns: tau,coord,ell,grad_ell,dtau_ell,K
void write_field_csv(const std::string& path, const ReducedDistanceField& f,
                     const std::string& config_hash);

struct LimitRecord {
    std::string model;
    std::string weight;
    std::string quantity;
    LimitEstimate estimate;
};

// JSON array of {model, weight, quantity, limit, error, converged}
std::string limits_json(const std::vector<LimitRecord>& records, const std::string& config_hash);

// JSON {weight_id, status, worst_residual, witness_center, witness_scale}
std::string certification_json(const CertificationReport& rep, const std::string& config_hash);

void write_text(const std::string& path, const std::string& content);

}  // namespace redgeo::io
