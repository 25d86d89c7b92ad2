#include "spectral/nnlab/dataset.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace spectral::nnlab {

const char* provenance_name(Provenance p) {
    return p == Provenance::Clean ? "CLEAN" : "POISON";
}

std::vector<int> LabeledDataset::indices_of_label(int label) const {
    std::vector<int> out;
    for (int i = 0; i < size(); ++i)
        if (labels[i] == label) out.push_back(i);
    return out;
}

int LabeledDataset::count_of_label(int label) const {
    int c = 0;
    for (int l : labels)
        if (l == label) ++c;
    return c;
}

void LabeledDataset::validate() const {
    const std::size_t n = labels.size();
    if (provenance.size() != n)
        throw std::invalid_argument("LabeledDataset: provenance/labels misaligned");
    if (images.size() != n * static_cast<std::size_t>(example_size()))
        throw std::invalid_argument("LabeledDataset: images/labels misaligned");
    for (int l : labels)
        if (l < 0 || l >= num_classes)
            throw std::invalid_argument("LabeledDataset: label out of range");
    for (double v : images)
        if (!(v >= 0.0 && v <= 1.0))
            throw std::invalid_argument("LabeledDataset: pixel outside [0, 1]");
}

void save_dataset(const LabeledDataset& data, const std::string& dir) {
    std::filesystem::create_directories(dir);

    std::ofstream img(dir + "/images.bin", std::ios::binary);
    if (!img) throw std::runtime_error("save_dataset: cannot write " + dir + "/images.bin");
    const std::int64_t header[4] = {data.size(), data.height, data.width, data.channels};
    img.write(reinterpret_cast<const char*>(header), sizeof(header));
    img.write(reinterpret_cast<const char*>(data.images.data()),
              static_cast<std::streamsize>(data.images.size() * sizeof(double)));

    std::ofstream csv(dir + "/labels.csv");
    if (!csv) throw std::runtime_error("save_dataset: cannot write " + dir + "/labels.csv");
    csv << "index,label,provenance\n";
    for (int i = 0; i < data.size(); ++i)
        csv << i << "," << data.labels[i] << "," << provenance_name(data.provenance[i]) << "\n";
}

LabeledDataset load_dataset(const std::string& dir) {
    std::ifstream img(dir + "/images.bin", std::ios::binary);
    if (!img) throw std::runtime_error("load_dataset: cannot open " + dir + "/images.bin");
    std::int64_t header[4];
    img.read(reinterpret_cast<char*>(header), sizeof(header));
    if (!img) throw std::runtime_error("load_dataset: truncated header in " + dir);

    LabeledDataset data;
    const std::int64_t n = header[0];
    data.height = static_cast<int>(header[1]);
    data.width = static_cast<int>(header[2]);
    data.channels = static_cast<int>(header[3]);
    if (n < 0 || data.height < 1 || data.width < 1 || data.channels < 1)
        throw std::runtime_error("load_dataset: bad header in " + dir);
    data.images.resize(static_cast<std::size_t>(n) * data.example_size());
    img.read(reinterpret_cast<char*>(data.images.data()),
             static_cast<std::streamsize>(data.images.size() * sizeof(double)));
    if (!img) throw std::runtime_error("load_dataset: truncated image data in " + dir);

    std::ifstream csv(dir + "/labels.csv");
    if (!csv) throw std::runtime_error("load_dataset: cannot open " + dir + "/labels.csv");
    std::string line;
    std::getline(csv, line);  // header
    data.labels.reserve(n);
    data.provenance.reserve(n);
    int max_label = -1;
    while (std::getline(csv, line)) {
        if (line.empty()) continue;
        int index = 0, label = 0;
        char prov[16] = {0};
        if (std::sscanf(line.c_str(), "%d,%d,%15s", &index, &label, prov) != 3)
            throw std::runtime_error("load_dataset: bad labels.csv row: " + line);
        data.labels.push_back(label);
        data.provenance.push_back(std::string(prov) == "POISON" ? Provenance::Poison
                                                                : Provenance::Clean);
        max_label = std::max(max_label, label);
    }
    if (static_cast<std::int64_t>(data.labels.size()) != n)
        throw std::runtime_error("load_dataset: labels.csv row count does not match images.bin");
    data.num_classes = max_label + 1;
    data.validate();
    return data;
}

}  // namespace spectral::nnlab
