#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "efw/mixture.hpp"
#include "efw/sir.hpp"

namespace efw {

inline constexpr int kMixtureFormatVersion = 1;

/// Versioned text record of a fitted mixture:
///
///   efw-mixture 1 family=LogNormal n=3 origin=2020-03-01 seed=42 config=<hex>[ sir=b,g,N,I0,dt,steps]
///   <a> <b> <c>            (one line per component, shortest round-trip decimals)
///
/// SirWave mixtures reference the SIR run their base curve came from.
struct MixtureRecord {
    WaveletMixture mixture;
    std::uint64_t seed = 0;
    std::string config_hash;
    std::optional<SirReference> sir;
};

std::string write_mixture_record(const MixtureRecord& record);
MixtureRecord read_mixture_record(std::string_view text);

/// 64-bit FNV-1a, hex encoded.
std::string fnv1a_hex(std::string_view bytes);

}  // namespace efw
