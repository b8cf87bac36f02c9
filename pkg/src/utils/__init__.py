#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
設定とファイル入出力のユーティリティパッケージ
"""
