#pragma once

// Umbrella header for the whole library.

#include "hancnn/baselines/baselines.hpp"
#include "hancnn/common.hpp"
#include "hancnn/corpus/csv.hpp"
#include "hancnn/corpus/dataset.hpp"
#include "hancnn/corpus/manifest.hpp"
#include "hancnn/corpus/record.hpp"
#include "hancnn/corpus/sogou.hpp"
#include "hancnn/encoding/alphabet.hpp"
#include "hancnn/encoding/embedding.hpp"
#include "hancnn/encoding/encoder.hpp"
#include "hancnn/io.hpp"
#include "hancnn/model/checkpoint.hpp"
#include "hancnn/model/config.hpp"
#include "hancnn/model/network.hpp"
#include "hancnn/model/train.hpp"
#include "hancnn/nn/activations.hpp"
#include "hancnn/nn/adam.hpp"
#include "hancnn/nn/conv.hpp"
#include "hancnn/nn/dense.hpp"
#include "hancnn/nn/dropout.hpp"
#include "hancnn/nn/grad_check.hpp"
#include "hancnn/nn/init.hpp"
#include "hancnn/nn/loss.hpp"
#include "hancnn/nn/pooling.hpp"
#include "hancnn/pinyin/pinyin.hpp"
#include "hancnn/rng.hpp"
#include "hancnn/tensor.hpp"
#include "hancnn/utf8.hpp"
