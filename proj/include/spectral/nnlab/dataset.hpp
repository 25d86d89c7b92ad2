#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace spectral::nnlab {

// Ground-truth tag carried for audits only; detection code never reads it.
enum class Provenance : std::uint8_t { Clean, Poison };

const char* provenance_name(Provenance p);

struct LabeledDataset {
    int height = 0;
    int width = 0;
    int channels = 0;
    int num_classes = 0;
    std::vector<double> images;  // n * h * w * c, row-major (c fastest), values in [0, 1]
    std::vector<int> labels;
    std::vector<Provenance> provenance;

    int size() const { return static_cast<int>(labels.size()); }
    int example_size() const { return height * width * channels; }

    std::span<const double> image(int i) const {
        return {images.data() + static_cast<std::size_t>(i) * example_size(),
                static_cast<std::size_t>(example_size())};
    }
    std::span<double> image(int i) {
        return {images.data() + static_cast<std::size_t>(i) * example_size(),
                static_cast<std::size_t>(example_size())};
    }

    std::vector<int> indices_of_label(int label) const;
    int count_of_label(int label) const;

    void validate() const;
};

// Directory layout: images.bin (header of four little-endian int64 fields
// n/h/w/c, then raw float64 pixels) and labels.csv (index,label,provenance).
void save_dataset(const LabeledDataset& data, const std::string& dir);
LabeledDataset load_dataset(const std::string& dir);

}  // namespace spectral::nnlab
