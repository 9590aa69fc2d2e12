#include "hfgsim/hfit.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

namespace hfgsim {

int PlaceIndex::index_of(const std::string& operandId, const std::string& bufferId) const {
    for (int i = 0; i < size(); ++i) {
        if (places[i].operandId == operandId && places[i].bufferId == bufferId) return i;
    }
    return -1;
}

int PlaceIndex::water_index_of(const std::string& bufferId) const {
    auto it = waterLookup_.find(bufferId);
    return it == waterLookup_.end() ? -1 : it->second;
}

int PlaceIndex::nitrogen_index_of(const std::string& bufferId) const {
    auto it = nitrogenLookup_.find(bufferId);
    return it == nitrogenLookup_.end() ? -1 : it->second;
}

int CapabilityIndex::index_of(const std::string& capabilityId) const {
    auto it = lookup_.find(capabilityId);
    return it == lookup_.end() ? -1 : it->second;
}

PlaceIndex build_place_index(const InstantiatedArchitecture& arch) {
    PlaceIndex index;
    const Operand* water = arch.volume_operand();
    const Operand* nitrogen = arch.mass_operand();

    const BufferClass classOrder[3] = {BufferClass::Lake, BufferClass::Land,
                                       BufferClass::Point};
    int block = 0;
    index.blockOffsets[0] = 0;
    for (const Operand* op : {water, nitrogen}) {
        for (BufferClass cls : classOrder) {
            if (op != nullptr) {
                for (size_t pos = 0; pos < arch.buffers.size(); ++pos) {
                    const Buffer& b = arch.buffers[pos];
                    if (b.bufferClass != cls) continue;
                    index.places.push_back(
                        {op->id, b.id, op->kind, b.bufferClass, static_cast<int>(pos)});
                }
            }
            ++block;
            index.blockOffsets[block] = static_cast<int>(index.places.size());
        }
        if (op == water) index.waterCount = static_cast<int>(index.places.size());
    }

    for (int i = 0; i < index.size(); ++i) {
        const auto& p = index.places[i];
        if (p.kind == QuantityKind::Volume) {
            index.waterLookup_[p.bufferId] = i;
        } else {
            index.nitrogenLookup_[p.bufferId] = i;
        }
    }
    return index;
}

namespace {

int class_block(CapabilityClass c) { return static_cast<int>(c); }

}  // namespace

CapabilityIndex build_capability_index(const InstantiatedArchitecture& arch) {
    CapabilityIndex index;
    index.blockOffsets[0] = 0;
    for (int block = 0; block < kCapabilityClassCount; ++block) {
        for (size_t pos = 0; pos < arch.capabilities.size(); ++pos) {
            const Capability& c = arch.capabilities[pos];
            if (class_block(c.cls) != block) continue;
            index.lookup_[c.id] = static_cast<int>(index.ids.size());
            index.ids.push_back(c.id);
            index.classes.push_back(c.cls);
            index.archPositions.push_back(static_cast<int>(pos));
        }
        index.blockOffsets[block + 1] = static_cast<int>(index.ids.size());
    }
    return index;
}

double SparseMatrix::at(int row, int col) const {
    for (const Triplet& t : entries) {
        if (t.col == col && t.row == row) return t.value;
        if (t.col > col) break;
    }
    return 0.0;
}

int SparseMatrix::column_nonzeros(int col) const {
    int n = 0;
    for (const Triplet& t : entries) {
        if (t.col == col) ++n;
        if (t.col > col) break;
    }
    return n;
}

std::vector<double> SparseMatrix::to_dense() const {
    const long size = static_cast<long>(rows) * cols;
    if (size >= 10000) {
        throw std::length_error("dense conversion refused above 10^4 entries");
    }
    std::vector<double> dense(static_cast<size_t>(size), 0.0);
    for (const Triplet& t : entries) {
        dense[static_cast<size_t>(t.row) * cols + t.col] = t.value;
    }
    return dense;
}

void SparseMatrix::add_product(const std::vector<double>& x, std::vector<double>& y) const {
    for (const Triplet& t : entries) {
        y[t.row] += t.value * x[t.col];
    }
}

void SparseMatrix::sort_entries() {
    std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
        return a.col != b.col ? a.col < b.col : a.row < b.row;
    });
}

bool SparseMatrix::operator==(const SparseMatrix& other) const {
    if (rows != other.rows || cols != other.cols ||
        entries.size() != other.entries.size()) {
        return false;
    }
    for (size_t i = 0; i < entries.size(); ++i) {
        const Triplet& a = entries[i];
        const Triplet& b = other.entries[i];
        if (a.row != b.row || a.col != b.col || a.value != b.value) return false;
    }
    return true;
}

IncidenceTensors build_incidence(const InstantiatedArchitecture& arch,
                                 const PlaceIndex& placeIndex,
                                 const CapabilityIndex& capabilityIndex) {
    IncidenceTensors tensors;
    const int rows = placeIndex.size();
    const int cols = capabilityIndex.size();
    for (SparseMatrix* m : {&tensors.plus, &tensors.minus, &tensors.net}) {
        m->rows = rows;
        m->cols = cols;
    }
    tensors.placeBlocks = placeIndex.blockOffsets;
    tensors.capabilityBlocks = capabilityIndex.blockOffsets;

    auto put = [](SparseMatrix& m, int row, int col, double value) {
        m.entries.push_back({row, col, value});
    };

    for (int col = 0; col < cols; ++col) {
        const Capability& c = arch.capabilities[capabilityIndex.archPositions[col]];
        if (is_accept(c.cls)) {
            const Operand* op = arch.find_operand(c.operandId);
            const int row = op->kind == QuantityKind::Volume
                                ? placeIndex.water_index_of(c.atBuffer)
                                : placeIndex.nitrogen_index_of(c.atBuffer);
            put(tensors.plus, row, col, 1.0);
            put(tensors.net, row, col, 1.0);
        } else if (is_mix(c.cls)) {
            // Self-loop on both operand places; cancels in the net matrix.
            for (int row : {placeIndex.water_index_of(c.atBuffer),
                            placeIndex.nitrogen_index_of(c.atBuffer)}) {
                put(tensors.plus, row, col, 1.0);
                put(tensors.minus, row, col, 1.0);
            }
        } else {
            const bool waterborne = is_water_transport(c.cls);
            const int originRow = waterborne
                                      ? placeIndex.water_index_of(c.originBuffer)
                                      : placeIndex.nitrogen_index_of(c.originBuffer);
            const int destRow = waterborne
                                    ? placeIndex.water_index_of(c.destinationBuffer)
                                    : placeIndex.nitrogen_index_of(c.destinationBuffer);
            put(tensors.minus, originRow, col, 1.0);
            put(tensors.plus, destRow, col, 1.0);
            put(tensors.net, originRow, col, -1.0);
            put(tensors.net, destRow, col, 1.0);
        }
    }

    tensors.plus.sort_entries();
    tensors.minus.sort_entries();
    tensors.net.sort_entries();
    return tensors;
}

SparseMatrix block_view(const IncidenceTensors& tensors, TensorPart part,
                        int operandBlock, int capabilityBlock) {
    if (operandBlock < 1 || operandBlock > kPlaceBlockCount || capabilityBlock < 1 ||
        capabilityBlock > kCapabilityClassCount) {
        throw std::out_of_range("block indices are 1..6 x 1..10");
    }
    const SparseMatrix& source = part == TensorPart::Plus    ? tensors.plus
                                 : part == TensorPart::Minus ? tensors.minus
                                                             : tensors.net;
    const int rowLo = tensors.placeBlocks[operandBlock - 1];
    const int rowHi = tensors.placeBlocks[operandBlock];
    const int colLo = tensors.capabilityBlocks[capabilityBlock - 1];
    const int colHi = tensors.capabilityBlocks[capabilityBlock];

    SparseMatrix view;
    view.rows = rowHi - rowLo;
    view.cols = colHi - colLo;
    for (const SparseMatrix::Triplet& t : source.entries) {
        if (t.row >= rowLo && t.row < rowHi && t.col >= colLo && t.col < colHi) {
            view.entries.push_back({t.row - rowLo, t.col - colLo, t.value});
        }
    }
    view.sort_entries();
    return view;
}

bool block_may_be_nonzero(int operandBlock, int capabilityBlock) {
    // Nonzero blocks of the block-matrix layout, rows 1..6 by columns 1..10.
    static const bool allowed[kPlaceBlockCount][kCapabilityClassCount] = {
        {1, 0, 0, 1, 0, 0, 1, 0, 1, 0},  // water-lake
        {0, 1, 0, 0, 1, 0, 1, 0, 0, 0},  // water-land
        {0, 0, 0, 0, 0, 1, 0, 0, 1, 0},  // water-point
        {0, 0, 0, 1, 0, 0, 0, 1, 0, 1},  // nitrogen-lake
        {0, 0, 1, 0, 1, 0, 0, 1, 0, 0},  // nitrogen-land
        {0, 0, 0, 0, 0, 1, 0, 0, 0, 1},  // nitrogen-point
    };
    return allowed[operandBlock - 1][capabilityBlock - 1];
}

std::string to_triplet_csv(const SparseMatrix& m) {
    std::string out = "row,col,val\n";
    char line[64];
    for (const SparseMatrix::Triplet& t : m.entries) {
        std::snprintf(line, sizeof(line), "%d,%d,%.17g\n", t.row, t.col, t.value);
        out += line;
    }
    return out;
}

}  // namespace hfgsim
