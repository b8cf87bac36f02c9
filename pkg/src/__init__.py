#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
curvhomo - ルートパッケージ
"""

__version__ = "1.0.0"
