#pragma once

// Hetero-functional incidence tensors in their matricized (2nd-order) form.
//
// Rows are operand-at-buffer places in six vertically stacked blocks:
//   [water-Lake; water-Land; water-Point; nitrogen-Lake; nitrogen-Land; nitrogen-Point]
// Columns are capabilities in ten stacked blocks following CapabilityClass
// order. Buffers and capabilities keep their declaration order within a
// block, so both indices are deterministic functions of the architecture.
//
// M+ records injection (+1 per (place, capability) pair), M- records
// withdrawal, and the net matrix is M = M+ - M-. Mix capabilities are
// self-loops on both operand places at their buffer: present in M+ and M-,
// cancelled in M.

#include <array>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "hfgsim/architecture.hpp"

namespace hfgsim {

constexpr int kPlaceBlockCount = 6;

/// Ordered list of realized (operand, buffer) pairs. Water places come
/// first; entries [0, waterCount) form the water sub-index used by the
/// head and transport device models.
struct PlaceIndex {
    struct Place {
        std::string operandId;
        std::string bufferId;
        QuantityKind kind = QuantityKind::Volume;
        BufferClass bufferClass = BufferClass::Lake;
        int bufferPos = 0;  // position in arch.buffers
    };

    std::vector<Place> places;
    int waterCount = 0;
    // blockOffsets[b]..blockOffsets[b+1] is block b (0-based; 6 blocks).
    std::array<int, kPlaceBlockCount + 1> blockOffsets{};

    int size() const { return static_cast<int>(places.size()); }

    /// Row of (operand, buffer), or -1 when the pair is not realized.
    int index_of(const std::string& operandId, const std::string& bufferId) const;
    /// Water row of a buffer, or -1.
    int water_index_of(const std::string& bufferId) const;
    /// Nitrogen row of a buffer, or -1.
    int nitrogen_index_of(const std::string& bufferId) const;

private:
    friend PlaceIndex build_place_index(const InstantiatedArchitecture&);
    std::unordered_map<std::string, int> waterLookup_;
    std::unordered_map<std::string, int> nitrogenLookup_;
};

/// Ordered list of capability ids in the ten-block order.
struct CapabilityIndex {
    std::vector<std::string> ids;
    std::vector<CapabilityClass> classes;   // parallel to ids
    std::vector<int> archPositions;         // column -> position in arch.capabilities
    std::array<int, kCapabilityClassCount + 1> blockOffsets{};

    int size() const { return static_cast<int>(ids.size()); }
    /// Column of a capability id, or -1.
    int index_of(const std::string& capabilityId) const;

private:
    friend CapabilityIndex build_capability_index(const InstantiatedArchitecture&);
    std::unordered_map<std::string, int> lookup_;
};

/// Sparse matrix stored as coordinate triplets sorted by (column, row).
struct SparseMatrix {
    struct Triplet {
        int row = 0;
        int col = 0;
        double value = 0.0;
    };

    int rows = 0;
    int cols = 0;
    std::vector<Triplet> entries;  // sorted by (col, row)

    double at(int row, int col) const;
    int column_nonzeros(int col) const;
    /// Dense row-major copy. Refused above 10^4 entries.
    std::vector<double> to_dense() const;
    /// y += M * x (y sized rows, x sized cols).
    void add_product(const std::vector<double>& x, std::vector<double>& y) const;

    void sort_entries();
    bool operator==(const SparseMatrix& other) const;
};

enum class TensorPart { Plus, Minus, Net };

struct IncidenceTensors {
    SparseMatrix plus;   // M+, entries in {0,1}
    SparseMatrix minus;  // M-, entries in {0,1}
    SparseMatrix net;    // M = M+ - M-, entries in {-1,0,1}
    std::array<int, kPlaceBlockCount + 1> placeBlocks{};
    std::array<int, kCapabilityClassCount + 1> capabilityBlocks{};
};

PlaceIndex build_place_index(const InstantiatedArchitecture& arch);
CapabilityIndex build_capability_index(const InstantiatedArchitecture& arch);

/// Builds M+, M-, M from a validated architecture and its two indices.
///  Accept(l at b):      M+[(l,b)] = 1
///  Mix at b:            M+ = M- = 1 at both (water,b) and (nitrogen,b)
///  Transport(l, o->d):  M-[(l,o)] = 1, M+[(l,d)] = 1
IncidenceTensors build_incidence(const InstantiatedArchitecture& arch,
                                 const PlaceIndex& placeIndex,
                                 const CapabilityIndex& capabilityIndex);

/// Slice of one tensor by (operand block, capability block), blocks 1-based
/// (operand 1..6, capability 1..10) to match the block-matrix convention.
SparseMatrix block_view(const IncidenceTensors& tensors, TensorPart part,
                        int operandBlock, int capabilityBlock);

/// True when the block-matrix layout allows (operandBlock, capabilityBlock)
/// to be nonzero; every other block is structurally zero for any watershed
/// architecture. Blocks are 1-based.
bool block_may_be_nonzero(int operandBlock, int capabilityBlock);

/// Debug dump: one "row,col,val" line per triplet, sorted by (col, row).
std::string to_triplet_csv(const SparseMatrix& m);

}  // namespace hfgsim
