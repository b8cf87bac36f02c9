#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
モデル空間・多様体族・ヤコビ作用素・不変量のパッケージ
"""
