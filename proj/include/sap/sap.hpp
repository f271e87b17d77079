#pragma once

// Umbrella header: the whole pipeline in one include.

#include "alist.hpp"
#include "bp.hpp"
#include "catalog.hpp"
#include "channel.hpp"
#include "checkpoint.hpp"
#include "decoder.hpp"
#include "gf2.hpp"
#include "harness.hpp"
#include "jacobi.hpp"
#include "json_io.hpp"
#include "library.hpp"
#include "lora.hpp"
#include "mask.hpp"
#include "pruning.hpp"
#include "rng.hpp"
#include "spectrum.hpp"
#include "tensor.hpp"
#include "train.hpp"
