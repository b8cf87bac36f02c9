#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
検証スイートとレポート出力のパッケージ
"""
