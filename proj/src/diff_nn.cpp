#include "dbf/diff/nn.hpp"

namespace dbf::diff {

Var dense(const Var& x, const Var& W, const Var& b) {
    return add_rowvec(matmul(x, W), b);
}

Var gru_cell(const Var& x, const Var& h, const GruWeights& w) {
    if (x.rows() != h.rows()) throw DataError("gru_cell: batch mismatch between x and h");
    const Var xh = concat_cols({x, h});
    const Var z = sigmoid(dense(xh, w.Wz, w.bz));
    const Var r = sigmoid(dense(xh, w.Wr, w.br));
    const Var cand = tanh_(dense(concat_cols({x, mul(r, h)}), w.Wh, w.bh));
    // h' = (1 - z) . h + z . cand = h + z . (cand - h)
    return add(h, mul(z, sub(cand, h)));
}

LstmState lstm_cell(const Var& x, const LstmState& s, const LstmWeights& w) {
    if (x.rows() != s.h.rows()) throw DataError("lstm_cell: batch mismatch between x and h");
    const int H = static_cast<int>(s.h.cols());
    const Var gates = dense(concat_cols({x, s.h}), w.W, w.b);
    if (gates.cols() != 4 * H) throw DataError("lstm_cell: weight shape mismatch");
    const Var i = sigmoid(slice_cols(gates, 0, H));
    const Var f = sigmoid(slice_cols(gates, H, H));
    const Var gcand = tanh_(slice_cols(gates, 2 * H, H));
    const Var o = sigmoid(slice_cols(gates, 3 * H, H));
    const Var c = add(mul(f, s.c), mul(i, gcand));
    return {mul(o, tanh_(c)), c};
}

Var causal_conv1d(const Var& x, const Conv1dWeights& w) {
    const int K = static_cast<int>(w.taps.size());
    if (K < 1) throw DataError("causal_conv1d: no taps");
    const int T = static_cast<int>(x.rows());
    const int out_len = conv1d_output_length(T, K, w.dilation);
    if (out_len < 1) throw DataError("causal_conv1d: input shorter than receptive field");
    Var y = matmul(slice_rows(x, 0, out_len), w.taps[0]);
    for (int k = 1; k < K; ++k)
        y = add(y, matmul(slice_rows(x, k * w.dilation, out_len), w.taps[k]));
    return add_rowvec(y, w.bias);
}

AttentionResult multi_head_attention(const Var& q, const Var& k, const Var& v,
                                     const AttentionWeights& w, int heads) {
    const int D = static_cast<int>(w.Wq.cols());
    if (D % heads != 0) throw DataError("attention: model dim not divisible by heads");
    const int dh = D / heads;
    const Var Q = dense(q, w.Wq, w.bq);
    const Var K = dense(k, w.Wk, w.bk);
    const Var V = dense(v, w.Wv, w.bv);
    const double inv_sqrt = 1.0 / std::sqrt(static_cast<double>(dh));

    AttentionResult res;
    std::vector<Var> head_out;
    head_out.reserve(heads);
    for (int h = 0; h < heads; ++h) {
        const Var Qh = slice_cols(Q, h * dh, dh);
        const Var Kh = slice_cols(K, h * dh, dh);
        const Var Vh = slice_cols(V, h * dh, dh);
        const Var att = softmax_rows(scale(matmul(Qh, transpose(Kh)), inv_sqrt));
        res.head_weights.push_back(att);
        head_out.push_back(matmul(att, Vh));
    }
    res.output = dense(concat_cols(head_out), w.Wo, w.bo);
    return res;
}

Eigen::MatrixXd dropout_mask(Eigen::Index rows, Eigen::Index cols, double p, Rng& rng) {
    if (p <= 0.0) return Eigen::MatrixXd::Ones(rows, cols);
    if (p >= 1.0) throw DataError("dropout: p must be < 1");
    Eigen::MatrixXd m(rows, cols);
    const double keep_scale = 1.0 / (1.0 - p);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = rng.uniform() < p ? 0.0 : keep_scale;
    return m;
}

}  // namespace dbf::diff
