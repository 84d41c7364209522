#!/usr/bin/env python3
# Copyright 2026 The cimsched Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Writes the benchmark model descriptions used by the sweep.

Layer names follow Keras auto-naming so per-layer figures can be looked up
by name. Only shapes are described; no weight files are referenced.
"""

import argparse
import json
import pathlib


class Builder:
    def __init__(self, name):
        self.name = name
        self.layers = []
        self.counters = {}

    def fresh(self, prefix):
        k = self.counters.get(prefix, 0)
        self.counters[prefix] = k + 1
        return prefix if k == 0 else f"{prefix}_{k}"

    def add(self, prefix, op, inputs, **attrs):
        name = self.fresh(prefix)
        layer = {"name": name, "op": op}
        if inputs:
            layer["inputs"] = list(inputs)
        if attrs:
            layer["attrs"] = attrs
        self.layers.append(layer)
        return name

    def input(self, shape):
        return self.add("input", "input", [], shape=list(shape))

    def conv(self, x, kh, kin, kout, stride=1, padding="same", bias=False):
        return self.add("conv2d", "conv2d", [x], kernel=[kh, kh, kin, kout],
                        stride=[stride, stride], padding=padding, bias=bias)

    def bn(self, x):
        return self.add("batch_normalization", "batchnorm", [x])

    def act(self, x, fn):
        prefix = {"relu": "activation", "leaky_relu": "leaky_re_lu"}[fn]
        if fn == "leaky_relu":
            return self.add(prefix, "activation", [x], function=fn, alpha=0.1)
        return self.add(prefix, "activation", [x], function=fn)

    def pad(self, x, top, bottom, left, right):
        return self.add("zero_padding2d", "pad", [x], pads=[top, bottom, left, right])

    def maxpool(self, x, size, stride):
        return self.add("max_pooling2d", "maxpool2d", [x], size=[size, size], stride=[stride, stride])

    def concat(self, xs, axis="c"):
        return self.add("concatenate", "concat", xs, axis=axis)

    def doc(self):
        return {"name": self.name, "layers": self.layers}


def dbl(b, x, kh, kin, kout, stride=1, padding="same"):
    return b.act(b.bn(b.conv(x, kh, kin, kout, stride, padding)), "leaky_relu")


def tinyyolov4():
    b = Builder("tinyyolov4")
    x = b.input((416, 416, 3))
    x = dbl(b, b.pad(x, 1, 0, 1, 0), 3, 3, 32, 2, "valid")
    x = dbl(b, b.pad(x, 1, 0, 1, 0), 3, 32, 64, 2, "valid")
    route_feat = None
    for ch in (64, 128, 256):
        r0 = dbl(b, x, 3, ch, ch)
        side = {64: 104, 128: 52, 256: 26}[ch]
        half = b.add("tf_op_layer_split", "slice", [r0], begin=[0, 0, ch // 2],
                     size=[side, side, ch // 2])
        r1 = dbl(b, half, 3, ch // 2, ch // 2)
        r2 = dbl(b, r1, 3, ch // 2, ch // 2)
        cat = b.concat([r2, r1])
        r3 = dbl(b, cat, 1, ch, ch)
        route_feat = r3
        x = b.maxpool(b.concat([r0, r3]), 2, 2)
    x = dbl(b, x, 3, 512, 512)
    head = dbl(b, x, 1, 512, 256)
    y = dbl(b, head, 3, 256, 512)
    b.conv(y, 1, 512, 255, bias=True)
    z = dbl(b, head, 1, 256, 128)
    z = b.add("up_sampling2d", "upsample2d", [z], factor=2)
    z = b.concat([z, route_feat])
    z = dbl(b, z, 3, 384, 256)
    b.conv(z, 1, 256, 255, bias=True)
    return b.doc()


def tinyyolov3():
    b = Builder("tinyyolov3")
    x = b.input((416, 416, 3))
    route = None
    for kin, kout in ((3, 16), (16, 32), (32, 64), (64, 128), (128, 256)):
        x = dbl(b, x, 3, kin, kout)
        if kout == 256:
            route = x
        x = b.maxpool(x, 2, 2)
    x = dbl(b, x, 3, 256, 512)
    x = b.maxpool(b.pad(x, 0, 1, 0, 1), 2, 1)
    x = dbl(b, x, 3, 512, 1024)
    head = dbl(b, x, 1, 1024, 256)
    y = dbl(b, head, 3, 256, 512)
    b.conv(y, 1, 512, 255, bias=True)
    z = dbl(b, head, 1, 256, 128)
    z = b.add("up_sampling2d", "upsample2d", [z], factor=2)
    z = b.concat([z, route])
    z = dbl(b, z, 3, 384, 256)
    b.conv(z, 1, 256, 255, bias=True)
    return b.doc()


def vgg(name, blocks):
    b = Builder(name)
    x = b.input((224, 224, 3))
    kin = 3
    for n, kout in blocks:
        for _ in range(n):
            x = b.act(b.conv(x, 3, kin, kout, bias=True), "relu")
            kin = kout
        x = b.maxpool(x, 2, 2)
    return b.doc()


def resnet(name, counts):
    b = Builder(name)
    x = b.input((224, 224, 3))
    x = b.pad(x, 3, 3, 3, 3)
    x = b.act(b.bn(b.conv(x, 7, 3, 64, 2, "valid", bias=True)), "relu")
    x = b.maxpool(b.pad(x, 1, 1, 1, 1), 3, 2)
    kin = 64
    for stage, (n, f) in enumerate(zip(counts, (64, 128, 256, 512))):
        for i in range(n):
            stride = 2 if (i == 0 and stage > 0) else 1
            y = b.act(b.bn(b.conv(x, 1, kin, f, stride, "valid", bias=True)), "relu")
            y = b.act(b.bn(b.conv(y, 3, f, f, 1, "same", bias=True)), "relu")
            y = b.bn(b.conv(y, 1, f, 4 * f, 1, "valid", bias=True))
            if i == 0:
                s = b.bn(b.conv(x, 1, kin, 4 * f, stride, "valid", bias=True))
            else:
                s = x
            x = b.act(b.add("add", "add", [y, s]), "relu")
            kin = 4 * f
    return b.doc()


MODELS = {
    "tinyyolov4": tinyyolov4,
    "tinyyolov3": tinyyolov3,
    "vgg16": lambda: vgg("vgg16", [(2, 64), (2, 128), (3, 256), (3, 512), (3, 512)]),
    "vgg19": lambda: vgg("vgg19", [(2, 64), (2, 128), (4, 256), (4, 512), (4, 512)]),
    "resnet50": lambda: resnet("resnet50", (3, 4, 6, 3)),
    "resnet101": lambda: resnet("resnet101", (3, 4, 23, 3)),
    "resnet152": lambda: resnet("resnet152", (3, 8, 36, 3)),
}


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", type=pathlib.Path, default=pathlib.Path(__file__).parent)
    args = parser.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    for name, build in MODELS.items():
        path = args.out / f"{name}.json"
        path.write_text(json.dumps(build(), indent=1) + "\n")
        print(path)


if __name__ == "__main__":
    main()
