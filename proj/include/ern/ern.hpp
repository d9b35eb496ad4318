#pragma once

// Umbrella header for the evidence reasoning network library.

#include "ern/bench.hpp"
#include "ern/builder.hpp"
#include "ern/errors.hpp"
#include "ern/exporter.hpp"
#include "ern/ingest.hpp"
#include "ern/logic.hpp"
#include "ern/network.hpp"
#include "ern/pipeline.hpp"
#include "ern/reasoner.hpp"
#include "ern/record_queue.hpp"
#include "ern/serialize.hpp"
#include "ern/timestamp.hpp"
#include "ern/types.hpp"
#include "ern/weights.hpp"
