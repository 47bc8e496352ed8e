#include "tsclust/cluster_model.hpp"

namespace tsclust {

std::string_view to_string(Algorithm algorithm) {
    return algorithm == Algorithm::KShape ? "kshape" : "kmeans";
}

}  // namespace tsclust
