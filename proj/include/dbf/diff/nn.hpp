#pragma once

#include "dbf/diff/graph.hpp"

namespace dbf::diff {

// y = x W + b, x: B x In, W: In x Out, b: 1 x Out.
Var dense(const Var& x, const Var& W, const Var& b);

struct GruWeights {
    Var Wz, Wr, Wh;  // (In + H) x H
    Var bz, br, bh;  // 1 x H
};

// Standard GRU:
//   z = sigma(Wz [x, h] + bz), r = sigma(Wr [x, h] + br)
//   hcand = tanh(Wh [x, r . h] + bh), h' = (1 - z) . h + z . hcand
Var gru_cell(const Var& x, const Var& h, const GruWeights& w);

struct LstmWeights {
    Var W;  // (In + H) x 4H, gate order [i, f, g, o]
    Var b;  // 1 x 4H
};

struct LstmState {
    Var h, c;
};

LstmState lstm_cell(const Var& x, const LstmState& s, const LstmWeights& w);

struct Conv1dWeights {
    std::vector<Var> taps;  // K matrices, each C_in x C_out
    Var bias;               // 1 x C_out
    int dilation = 1;
};

// Strictly causal dilated convolution over rows-as-time. Input T x C_in,
// output (T - D*(K-1)) x C_out; output row j covers input rows j .. j+D*(K-1).
Var causal_conv1d(const Var& x, const Conv1dWeights& w);

inline int conv1d_output_length(int input_len, int kernel, int dilation) {
    return input_len - dilation * (kernel - 1);
}

struct AttentionWeights {
    Var Wq, Wk, Wv, Wo;  // D x D
    Var bq, bk, bv, bo;  // 1 x D
};

struct AttentionResult {
    Var output;                    // T x D
    std::vector<Var> head_weights;  // per head, Tq x Tk softmax rows
};

// softmax(Q K^T / sqrt(d_head)) V per head, heads concatenated and projected.
// q/k/v are pre-projection inputs (self-attention passes the same Var).
AttentionResult multi_head_attention(const Var& q, const Var& k, const Var& v,
                                     const AttentionWeights& w, int heads);

// Inverted-dropout mask: entries 1/(1-p) with probability 1-p, else 0.
// Multiply onto activations during training; identity at evaluation.
Eigen::MatrixXd dropout_mask(Eigen::Index rows, Eigen::Index cols, double p, Rng& rng);

}  // namespace dbf::diff
