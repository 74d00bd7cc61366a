// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "hda/array_channel.hpp"

namespace hda {

struct AnalogBeamformer {
    CMatrix U;  // M x M_RF
    Arch arch = Arch::FC;
};

struct MultifingerPattern {
    std::vector<int> subset;  // sorted grid indices, 0-based
    RVector coeffs;           // 1/sqrt(|subset|) on the subset, 0 elsewhere
};

// Assembles the full (FC) or block-diagonal (OSPS) matrix from per-chain
// columns and rescales globally so that sum ||u_i||^2 = M_RF.
// Column length is M for FC and M/M_RF for OSPS.
AnalogBeamformer build_analog(const ArrayConfig& cfg, const std::vector<CVector>& columns);

MultifingerPattern multifinger(int grid_size, std::vector<int> subset);

// Rows of the M-point DFT dictionary that belong to subarray `block` (all rows
// for FC). Returned as an M x M matrix with the other rows zeroed.
CMatrix masked_dft(const ArrayConfig& cfg, int block);

// Antenna-domain beacon pattern (F_M masked) * coeffs for stream `block`,
// rescaled to unit norm.
CVector beamformed_pattern(const ArrayConfig& cfg, const MultifingerPattern& pattern, int block);

}  // namespace hda
