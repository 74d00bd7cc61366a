// SPDX-License-Identifier: Apache-2.0
#include "hda/beamformers.hpp"

#include <algorithm>
#include <cmath>

#include "hda/errors.hpp"

namespace hda {

AnalogBeamformer build_analog(const ArrayConfig& cfg, const std::vector<CVector>& columns) {
    cfg.validate();
    if (static_cast<int>(columns.size()) != cfg.M_RF)
        throw StructuralError("expected M_RF analog columns");
    const int mh = cfg.block_size();
    AnalogBeamformer bf{CMatrix::Zero(cfg.M, cfg.M_RF), cfg.arch};
    for (int i = 0; i < cfg.M_RF; ++i) {
        if (columns[i].size() != mh) throw StructuralError("analog column has wrong length");
        if (cfg.arch == Arch::FC)
            bf.U.col(i) = columns[i];
        else
            bf.U.block(i * mh, i, mh, 1) = columns[i];
    }
    const double energy = bf.U.squaredNorm();
    if (!(energy > 0.0)) throw StructuralError("analog beamformer is identically zero");
    bf.U *= std::sqrt(cfg.M_RF / energy);
    return bf;
}

MultifingerPattern multifinger(int grid_size, std::vector<int> subset) {
    if (subset.empty()) throw DomainError("multifinger subset is empty");
    std::sort(subset.begin(), subset.end());
    if (std::adjacent_find(subset.begin(), subset.end()) != subset.end())
        throw DomainError("multifinger subset has duplicates");
    if (subset.front() < 0 || subset.back() >= grid_size)
        throw DomainError("multifinger index outside the grid");
    MultifingerPattern p{std::move(subset), RVector::Zero(grid_size)};
    const double c = 1.0 / std::sqrt(static_cast<double>(p.subset.size()));
    for (int idx : p.subset) p.coeffs(idx) = c;
    return p;
}

CMatrix masked_dft(const ArrayConfig& cfg, int block) {
    if (block < 0 || block >= cfg.num_blocks()) throw DomainError("invalid subarray index");
    CMatrix F = dft_matrix(cfg.M);
    if (cfg.arch == Arch::OSPS) {
        const int mh = cfg.block_size();
        for (int r = 0; r < cfg.M; ++r)
            if (r / mh != block) F.row(r).setZero();
    }
    return F;
}

CVector beamformed_pattern(const ArrayConfig& cfg, const MultifingerPattern& pattern, int block) {
    if (pattern.coeffs.size() != cfg.M) throw StructuralError("pattern must live on the M-point grid");
    CVector u = masked_dft(cfg, block) * pattern.coeffs.cast<cd>();
    const double norm = u.norm();
    if (!(norm > 0.0)) throw DomainError("beamformed pattern vanishes on this subarray");
    return u / norm;
}

}  // namespace hda
