#pragma once

// Umbrella header for the histocr evaluation library.

#include "histocr/alignment.hpp"
#include "histocr/analysis.hpp"
#include "histocr/config.hpp"
#include "histocr/ingest.hpp"
#include "histocr/lexicon.hpp"
#include "histocr/metrics.hpp"
#include "histocr/report_io.hpp"
#include "histocr/rng.hpp"
#include "histocr/synthetic.hpp"
#include "histocr/taxonomy.hpp"
#include "histocr/textnorm.hpp"
#include "histocr/unicode.hpp"
#include "histocr/version.hpp"
