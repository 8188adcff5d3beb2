#pragma once

#include "bitext/bleu.hpp"
#include "bitext/config.hpp"
#include "bitext/corpus.hpp"
#include "bitext/corpus_io.hpp"
#include "bitext/embed.hpp"
#include "bitext/embedding_file.hpp"
#include "bitext/error.hpp"
#include "bitext/filter.hpp"
#include "bitext/parallel.hpp"
#include "bitext/pipeline.hpp"
#include "bitext/random.hpp"
#include "bitext/stats.hpp"
#include "bitext/unicode.hpp"
